#pragma once

// Cross-label comparison for one use case, matched by normalized title.

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "dnl/html.hpp"
#include "dnl/label.hpp"
#include "dnl/render.hpp"
#include "dnl/resolve.hpp"

namespace dnl {

struct ComparisonEntry {
    std::string label_id;
    std::string dataset_name;
    std::optional<std::string> matched_use_case;  // nullopt = not applicable
    SeveritySummary severity_counts;
    std::uint64_t fyi_count = 0;
    Date date_produced{};
    std::optional<std::uint64_t> row_count;
    bool operator==(const ComparisonEntry&) const = default;

    bool matched() const { return matched_use_case.has_value(); }
};

struct ComparisonReport {
    std::string use_case_title;  // normalized
    std::vector<ComparisonEntry> entries;
    Timestamp generated_at{};
    bool operator==(const ComparisonReport&) const = default;
};

enum class CompareErrorKind { FewerThanTwoLabels, EmptyTitle, NoLabelMatches };

class CompareError : public Error {
public:
    CompareError(CompareErrorKind kind, const std::string& message) : Error(code_for(kind), message), kind_(kind) {}
    CompareErrorKind kind() const noexcept { return kind_; }

private:
    static std::string code_for(CompareErrorKind k) {
        switch (k) {
            case CompareErrorKind::FewerThanTwoLabels: return "FEWER_THAN_TWO_LABELS";
            case CompareErrorKind::EmptyTitle: return "EMPTY_USE_CASE_TITLE";
            case CompareErrorKind::NoLabelMatches: return "NO_LABEL_MATCHES";
        }
        return "NO_LABEL_MATCHES";
    }
    CompareErrorKind kind_;
};

inline std::optional<std::uint64_t> embedded_row_count(const Label& l) {
    for (const auto& m : l.overview_modules)
        if (const auto* s = std::get_if<ComputedStatsModule>(&m)) return s->row_count;
    return std::nullopt;
}

/// Per-label severity counts for the use case titled `use_case_title`, summed
/// over all of its predictions with each alert id counted once.
inline ComparisonReport compare_labels(std::span<const Label> labels, std::string_view use_case_title,
                                       Timestamp generated_at = now()) {
    if (labels.size() < 2)
        throw CompareError(CompareErrorKind::FewerThanTwoLabels, "comparison needs at least two labels");
    ComparisonReport report;
    report.use_case_title = normalize_title(use_case_title);
    if (report.use_case_title.empty())
        throw CompareError(CompareErrorKind::EmptyTitle, "use case title is empty");
    report.generated_at = generated_at;

    bool any = false;
    for (const auto& l : labels) {
        ComparisonEntry e;
        e.label_id = l.label_id;
        e.dataset_name = l.dataset_name;
        e.date_produced = l.date_produced;
        e.row_count = embedded_row_count(l);
        for (const auto& u : l.use_cases) {
            if (normalize_title(u.title) != report.use_case_title) continue;
            e.matched_use_case = u.id;
            auto materialized = materialize_questionnaire_flags(l);
            std::unordered_set<std::string> alert_ids, fyi_ids;
            for (const auto& p : u.predictions) {
                auto v = resolve(l, u.id, p.id, materialized);
                for (const auto& a : v.alerts)
                    if (alert_ids.insert(a.id).second) e.severity_counts.add(a.severity);
                for (const auto& f : v.fyis) fyi_ids.insert(f.id);
            }
            e.fyi_count = fyi_ids.size();
            any = true;
            break;
        }
        report.entries.push_back(std::move(e));
    }
    if (!any)
        throw CompareError(CompareErrorKind::NoLabelMatches,
                           "no label has a use case titled '" + report.use_case_title + "'");
    return report;
}

inline json to_json(const ComparisonEntry& e) {
    json j = {{"label_id", e.label_id},
              {"dataset_name", e.dataset_name},
              {"status", e.matched() ? "matched" : "not_applicable"},
              {"severity_counts", to_json(e.severity_counts)},
              {"fyi_count", e.fyi_count},
              {"date_produced", format_date(e.date_produced)}};
    if (e.matched_use_case) j["use_case_id"] = *e.matched_use_case;
    if (e.row_count) j["row_count"] = *e.row_count;
    return j;
}

inline json to_json(const ComparisonReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) entries.push_back(to_json(e));
    return {{"use_case_title", r.use_case_title},
            {"entries", std::move(entries)},
            {"generated_at", format_timestamp(r.generated_at)}};
}

inline std::string serialize_comparison(const ComparisonReport& r) { return canonical_dump(to_json(r)); }

/// One table: labels as columns, one row per severity plus FYIs and rows.
inline std::string render_comparison_html(const ComparisonReport& r) {
    if (r.entries.empty()) throw Error("RENDER_ERROR", "comparison report has no entries");
    using html::escape;
    std::string s;
    s += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Comparison &middot; " +
         escape(r.use_case_title) + "</title>\n<link rel=\"stylesheet\" href=\"assets/label.css\">\n</head>\n<body>\n";
    s += "<header class=\"label-header\">\n<h1>Label comparison</h1>\n<p class=\"label-meta\">Use case: <span "
         "class=\"use-case-title\">" +
         escape(r.use_case_title) + "</span> &middot; Generated " + format_timestamp(r.generated_at) +
         "</p>\n</header>\n<main>\n";
    s += "<table class=\"comparison\">\n<thead>\n<tr><th></th>";
    for (const auto& e : r.entries)
        s += "<th scope=\"col\" data-label-id=\"" + escape(e.label_id) + "\">" + escape(e.dataset_name) +
             "<br><small>" + escape(e.label_id) + " &middot; " + format_date(e.date_produced) + "</small></th>";
    s += "</tr>\n</thead>\n<tbody>\n";

    auto row = [&](std::string_view cls, std::string_view heading, auto value) {
        s += "<tr class=\"" + std::string(cls) + "\"><th scope=\"row\">" + std::string(heading) + "</th>";
        for (const auto& e : r.entries) {
            if (!e.matched()) {
                s += "<td class=\"not-applicable\">not applicable</td>";
                continue;
            }
            auto v = value(e);
            if (v) s += "<td data-count=\"" + std::to_string(*v) + "\">" + std::to_string(*v) + "</td>";
            else s += "<td class=\"unknown\">unknown</td>";
        }
        s += "</tr>\n";
    };
    using Opt = std::optional<std::uint64_t>;
    row("row-red", "Red &middot; no known mitigation", [](const ComparisonEntry& e) -> Opt { return e.severity_counts.red; });
    row("row-orange", "Orange &middot; partial mitigation", [](const ComparisonEntry& e) -> Opt { return e.severity_counts.orange; });
    row("row-yellow", "Yellow &middot; mitigation known", [](const ComparisonEntry& e) -> Opt { return e.severity_counts.yellow; });
    row("row-green", "Green &middot; FYI", [](const ComparisonEntry& e) -> Opt { return e.fyi_count; });
    row("row-rows", "Rows", [](const ComparisonEntry& e) -> Opt { return e.row_count; });
    s += "</tbody>\n</table>\n</main>\n</body>\n</html>\n";
    return s;
}

}  // namespace dnl
