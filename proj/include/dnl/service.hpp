#pragma once

// Transport-independent request handling for the label service. Every handler
// returns the status and canonical JSON body the HTTP layer sends verbatim.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dnl/compare.hpp"
#include "dnl/label_io.hpp"
#include "dnl/profile.hpp"
#include "dnl/resolve.hpp"
#include "dnl/store.hpp"

namespace dnl {

inline constexpr std::size_t kMaxCsvUpload = 50u * 1024u * 1024u;

struct ApiError {
    int http_status = 500;
    std::string code;
    std::string message;
};

struct Response {
    int status = 200;
    std::string body;
};

/// The one (status, code) pair each library error maps to.
inline ApiError to_api_error(const Error& e) {
    static const std::map<std::string, int, std::less<>> kStatus{
        {"MALFORMED_SYNTAX", 400},        {"MISSING_FIELD", 400},
        {"UNKNOWN_FIELD", 400},           {"BAD_ENUM_VALUE", 400},
        {"BAD_DATE", 400},                {"WRONG_TYPE", 400},
        {"BAD_REQUEST", 400},             {"NOT_FOUND", 404},
        {"DUPLICATE_ID", 409},            {"VALIDATION_FAILED", 422},
        {"UNKNOWN_USE_CASE", 404},        {"UNKNOWN_PREDICTION", 404},
        {"PREDICTION_NOT_IN_USE_CASE", 400},
        {"EMPTY_INPUT", 400},             {"RAGGED_ROW", 422},
        {"ENCODING_ERROR", 422},          {"MALFORMED_QUOTING", 422},
        {"PAYLOAD_TOO_LARGE", 413},       {"UNSUPPORTED_MEDIA_TYPE", 415},
        {"LABEL_HAS_NO_FINGERPRINT", 422},
        {"FEWER_THAN_TWO_LABELS", 400},   {"EMPTY_USE_CASE_TITLE", 400},
        {"NO_LABEL_MATCHES", 404},        {"EMPTY_COLUMN_LIST", 422},
    };
    auto it = kStatus.find(e.code());
    return {it == kStatus.end() ? 500 : it->second, e.code(), e.what()};
}

inline Response error_response(const Error& e) {
    auto api = to_api_error(e);
    json body = {{"code", api.code}, {"message", api.message}};
    if (const auto* v = dynamic_cast<const ValidationFailed*>(&e)) body["report"] = to_json(v->report());
    return {api.http_status, canonical_dump(body)};
}

class Service {
public:
    explicit Service(LabelStore& store) : store_(store) {}

    Response list_labels() const {
        return guarded([&] { return ok(canonical_dump(store_listing_json(*store_.snapshot()))); });
    }

    Response get_label(const std::string& id) const {
        return guarded([&] { return ok(entry(id)->canonical); });
    }

    Response get_use_cases(const std::string& id) const {
        return guarded([&] { return ok(canonical_dump(use_cases_to_json(entry(id)->label))); });
    }

    Response resolve(const std::string& id, const std::optional<std::string>& use_case,
                     const std::optional<std::string>& prediction) const {
        return guarded([&] {
            if (!use_case || !prediction)
                throw Error("BAD_REQUEST", "query parameters use_case and prediction are required");
            auto e = entry(id);
            return ok(serialize_resolved_view(dnl::resolve(e->label, *use_case, *prediction)));
        });
    }

    Response submit(std::string_view body) {
        return guarded([&] {
            auto id = store_.submit(body);
            return Response{201, canonical_dump(json{{"label_id", id}})};
        });
    }

    Response profile(std::string_view csv) const {
        return guarded([&] { return ok(serialize_profile(profile_upload(csv))); });
    }

    Response check_staleness(const std::string& id, std::string_view csv) const {
        return guarded([&] {
            auto e = entry(id);
            return ok(canonical_dump(to_json(dnl::check_staleness(e->label, profile_upload(csv)))));
        });
    }

    Response compare(const std::optional<std::string>& title, const std::optional<std::string>& ids) const {
        return guarded([&] {
            if (!title || !ids) throw Error("BAD_REQUEST", "query parameters use_case and ids are required");
            std::vector<Label> labels;
            std::stringstream ss(*ids);
            for (std::string id; std::getline(ss, id, ',');)
                if (!id.empty()) labels.push_back(entry(id)->label);
            return ok(serialize_comparison(compare_labels(labels, *title)));
        });
    }

private:
    static Response ok(std::string body) { return {200, std::move(body)}; }

    template <class F>
    static Response guarded(F&& f) {
        try {
            return f();
        } catch (const Error& e) {
            return error_response(e);
        }
    }

    std::shared_ptr<const LabelStore::Entry> entry(const std::string& id) const {
        auto e = store_.find(id);
        if (!e) throw Error("NOT_FOUND", "no label with id '" + id + "'");
        return e;
    }

    static DatasetProfile profile_upload(std::string_view csv) {
        if (csv.size() > kMaxCsvUpload) throw Error("PAYLOAD_TOO_LARGE", "CSV uploads are limited to 50 MiB");
        return profile_csv(csv);
    }

    LabelStore& store_;
};

}  // namespace dnl
