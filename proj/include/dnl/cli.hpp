#pragma once

// `dnl` command line. Exit codes: 0 success, 1 validation failure or stale
// data, 2 usage error, 3 I/O error. Machine output on stdout, diagnostics on
// stderr. JSON output is the canonical serialization with no trailing newline.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnl/compare.hpp"
#include "dnl/http.hpp"
#include "dnl/label_io.hpp"
#include "dnl/profile.hpp"
#include "dnl/render.hpp"
#include "dnl/resolve.hpp"
#include "dnl/store.hpp"

namespace dnl::cli {

enum Exit : int { kOk = 0, kFailed = 1, kUsage = 2, kIo = 3 };

namespace detail {

struct Usage : Error {
    explicit Usage(const std::string& m) : Error("USAGE", m) {}
};

inline void print_report(const ValidationReport& r, std::ostream& os) {
    for (const auto& v : r.violations)
        os << (v.level == Level::error ? "error " : "warning ") << v.code << " " << v.path << ": " << v.message
           << "\n";
}

inline Label load_label(const std::string& path) {
    auto label = parse_label(read_file(path));
    require_valid(label);
    return label;
}

inline DatasetProfile load_profile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IO_ERROR", "cannot read " + path);
    return profile_csv(in);
}

/// Maps library errors onto the exit-code contract.
inline int report_error(const Error& e, std::ostream& err) {
    err << "dnl: " << e.code() << ": " << e.what() << "\n";
    if (const auto* v = dynamic_cast<const ValidationFailed*>(&e)) print_report(v->report(), err);
    if (e.code() == "IO_ERROR" || e.code() == "BIND_FAILED") return kIo;
    if (e.code() == "USAGE" || dynamic_cast<const ResolveError*>(&e) ||
        (dynamic_cast<const CompareError*>(&e) &&
         static_cast<const CompareError&>(e).kind() != CompareErrorKind::NoLabelMatches))
        return kUsage;
    return kFailed;
}

}  // namespace detail

/// Runs one `dnl` invocation. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dataset nutrition label toolkit", "dnl"};
    app.require_subcommand(1);

    std::string label_path, csv_path, out_path, use_case, prediction, store_dir;
    std::vector<std::string> label_paths;
    bool as_json = false;
    int port = 8080;

    auto* validate = app.add_subcommand("validate", "Parse and validate a label document");
    validate->add_option("label", label_path, "Label file")->required();
    validate->add_flag("--json", as_json, "Print the validation report as JSON");

    auto* profile = app.add_subcommand("profile", "Profile a CSV file");
    profile->add_option("csv", csv_path, "CSV file")->required();
    profile->add_option("--out", out_path, "Write the profile JSON here instead of stdout");

    auto* fingerprint = app.add_subcommand("fingerprint", "Structural fingerprint of a CSV header");
    fingerprint->add_option("csv", csv_path, "CSV file")->required();

    auto* staleness = app.add_subcommand("check-staleness", "Compare a label's fingerprint with a CSV");
    staleness->add_option("label", label_path, "Label file")->required();
    staleness->add_option("csv", csv_path, "CSV file")->required();

    auto* resolve_cmd = app.add_subcommand("resolve", "Alerts and FYIs for a use case and prediction");
    resolve_cmd->add_option("label", label_path, "Label file")->required();
    resolve_cmd->add_option("--use-case", use_case, "Use case id")->required();
    resolve_cmd->add_option("--prediction", prediction, "Prediction id")->required();
    resolve_cmd->add_flag("--json", as_json, "Print the canonical JSON view");

    auto* compare = app.add_subcommand("compare", "Compare labels for one use case");
    compare->add_option("--use-case", use_case, "Use case title")->required();
    compare->add_option("labels", label_paths, "Label files")->required();
    compare->add_option("--out", out_path, "Also write comparison.html into this directory");

    auto* render = app.add_subcommand("render", "Render a label as static HTML");
    render->add_option("label", label_path, "Label file")->required();
    render->add_option("--out", out_path, "Output directory")->required();

    auto* serve = app.add_subcommand("serve", "Serve a label store over HTTP");
    serve->add_option("--store", store_dir, "Store directory (default: $DNL_STORE)");
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate) {
            Label label;
            try {
                label = parse_label(read_file(label_path));
            } catch (const ParseError& e) {
                if (as_json) {
                    ValidationReport r;
                    r.violations.push_back({Level::error, e.code(), e.path(), e.what()});
                    out << canonical_dump(to_json(r));
                } else {
                    out << "FAIL\n";
                    err << "error " << e.code() << " " << e.path() << ": " << e.what() << "\n";
                }
                return kFailed;
            }
            auto report = validate_label(label);
            if (as_json) {
                out << canonical_dump(to_json(report));
            } else {
                out << (report.passed() ? "OK" : "FAIL") << "\n";
                detail::print_report(report, err);
            }
            return report.passed() ? kOk : kFailed;
        }
        if (*profile) {
            auto bytes = serialize_profile(detail::load_profile(csv_path));
            if (out_path.empty()) out << bytes;
            else write_file_atomic(out_path, bytes);
            return kOk;
        }
        if (*fingerprint) {
            std::ifstream in(csv_path, std::ios::binary);
            if (!in) throw Error("IO_ERROR", "cannot read " + csv_path);
            out << canonical_dump(to_json(compute_fingerprint(read_csv_header(in))));
            return kOk;
        }
        if (*staleness) {
            auto label = detail::load_label(label_path);
            auto report = check_staleness(label, detail::load_profile(csv_path));
            out << canonical_dump(to_json(report));
            err << report.note << "\n";
            return report.verdict == Freshness::fresh ? kOk : kFailed;
        }
        if (*resolve_cmd) {
            auto label = detail::load_label(label_path);
            auto view = resolve(label, use_case, prediction);
            if (as_json) {
                out << serialize_resolved_view(view);
                return kOk;
            }
            out << "Use case " << view.use_case_id << ", prediction " << view.prediction_id << ": "
                << view.severity_summary.red << " red, " << view.severity_summary.orange << " orange, "
                << view.severity_summary.yellow << " yellow, " << view.fyis.size() << " FYI\n";
            for (const auto& a : view.alerts)
                out << "  [" << severity_color(a.severity) << "] " << a.id << "  " << a.title << "\n";
            for (const auto& f : view.fyis) out << "  [" << kFyiColor << "] " << f.id << "  " << f.title << "\n";
            return kOk;
        }
        if (*compare) {
            std::vector<Label> labels;
            for (const auto& p : label_paths) labels.push_back(detail::load_label(p));
            auto report = compare_labels(labels, use_case);
            out << serialize_comparison(report);
            if (!out_path.empty())
                html::write_document_set(out_path, {{"comparison.html", render_comparison_html(report)},
                                                    {"assets/label.css", std::string(kLabelCss)}});
            return kOk;
        }
        if (*render) {
            auto label = detail::load_label(label_path);
            auto docs = render_label_html(label);
            html::write_document_set(out_path, docs);
            for (const auto& [rel, body] : docs) out << (std::filesystem::path(out_path) / rel).string() << "\n";
            return kOk;
        }
        if (*serve) {
            if (store_dir.empty()) {
                const char* env = std::getenv("DNL_STORE");
                if (!env || !*env) throw detail::Usage("no store directory: pass --store or set DNL_STORE");
                store_dir = env;
            }
            LabelStore store(store_dir, err);
            HttpServer server(store);
            err << "dnl: serving " << store.snapshot()->size() << " label(s) from " << store_dir << " on port " << port
                << "\n";
            server.run("0.0.0.0", port);
            return kOk;
        }
    } catch (const Error& e) {
        return detail::report_error(e, err);
    } catch (const std::exception& e) {
        err << "dnl: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}

inline int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), std::cout, std::cerr);
}

}  // namespace dnl::cli
