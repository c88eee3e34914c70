#pragma once

// HTTP binding of dnl::Service on cpp-httplib.

#include <memory>
#include <string>
#include <thread>

#ifndef CPPHTTPLIB_LISTEN_BACKLOG
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#endif
#include <httplib.h>

#include "dnl/service.hpp"

namespace dnl {

class HttpServer {
public:
    explicit HttpServer(LabelStore& store) : service_(store) { routes(); }
    ~HttpServer() { stop(); }

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and serves on a background thread. Port 0 picks a free port.
    /// Returns the bound port.
    int start(const std::string& host, int port) {
        int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (bound < 0) throw Error("BIND_FAILED", "cannot bind " + host + ":" + std::to_string(port));
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return bound;
    }

    /// Binds and serves on the calling thread until stop().
    void run(const std::string& host, int port) {
        if (!server_.bind_to_port(host, port))
            throw Error("BIND_FAILED", "cannot bind " + host + ":" + std::to_string(port));
        server_.listen_after_bind();
    }

    void stop() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

private:
    static std::optional<std::string> param(const httplib::Request& req, const char* name) {
        if (!req.has_param(name)) return std::nullopt;
        return req.get_param_value(name);
    }

    static void send(httplib::Response& res, const Response& r, bool cors) {
        res.status = r.status;
        if (cors) res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body, "application/json");
    }

    static bool is_csv(const httplib::Request& req) {
        if (!req.has_header("Content-Type")) return true;
        return req.get_header_value("Content-Type").starts_with("text/csv");
    }

    void routes() {
        server_.set_payload_max_length(kMaxCsvUpload + 1024 * 1024);
        server_.Get("/labels", [this](const httplib::Request&, httplib::Response& res) {
            send(res, service_.list_labels(), true);
        });
        server_.Get(R"(/labels/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, service_.get_label(req.matches[1]), true);
        });
        server_.Get(R"(/labels/([^/]+)/use-cases)", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, service_.get_use_cases(req.matches[1]), true);
        });
        server_.Get(R"(/labels/([^/]+)/resolve)", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, service_.resolve(req.matches[1], param(req, "use_case"), param(req, "prediction")), true);
        });
        server_.Get("/compare", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, service_.compare(param(req, "use_case"), param(req, "ids")), true);
        });
        server_.Post("/labels", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, service_.submit(req.body), false);
        });
        server_.Post("/profile", [this](const httplib::Request& req, httplib::Response& res) {
            if (!is_csv(req))
                return send(res, error_response(Error("UNSUPPORTED_MEDIA_TYPE", "expected text/csv")), false);
            send(res, service_.profile(req.body), false);
        });
        server_.Post(R"(/labels/([^/]+)/check-staleness)",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         if (!is_csv(req))
                             return send(res, error_response(Error("UNSUPPORTED_MEDIA_TYPE", "expected text/csv")),
                                         false);
                         send(res, service_.check_staleness(req.matches[1], req.body), false);
                     });
        server_.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (!res.body.empty()) return;
            const char* code = res.status == 404 ? "NOT_FOUND" : res.status == 413 ? "PAYLOAD_TOO_LARGE" : "BAD_REQUEST";
            res.set_content(canonical_dump(json{{"code", code}, {"message", httplib::status_message(res.status)}}),
                            "application/json");
        });
    }

    Service service_;
    httplib::Server server_;
    std::thread thread_;
};

}  // namespace dnl
