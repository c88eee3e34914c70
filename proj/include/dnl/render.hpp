#pragma once

// Static, script-free HTML rendering of a label: index.html plus one page per
// pane and a shared stylesheet. Output is a pure function of the label.

#include <cstdio>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "dnl/html.hpp"
#include "dnl/label.hpp"
#include "dnl/resolve.hpp"
#include "dnl/validate.hpp"

namespace dnl {

class RenderError : public Error {
public:
    explicit RenderError(ValidationReport report)
        : Error("RENDER_ERROR", "cannot render a label that fails validation"), report_(std::move(report)) {}
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

struct Pane {
    std::string_view file;
    std::string_view title;
};

inline constexpr std::array<Pane, 3> kPanes{Pane{"overview.html", "Overview"},
                                            Pane{"use-cases.html", "Use Cases & Alerts"},
                                            Pane{"dataset-info.html", "Dataset Info"}};

inline std::string_view severity_label(Severity s) {
    switch (s) {
        case Severity::no_known_mitigation: return "No known mitigation";
        case Severity::partial_mitigation: return "Partial mitigation";
        case Severity::mitigation_known: return "Mitigation known";
    }
    return "";
}

/// CSS class carried by exactly one element per displayed alert or FYI.
inline std::string severity_class(Severity s) { return "sev-" + std::string(severity_color(s)); }
inline constexpr std::string_view kFyiClass = "sev-green";

inline constexpr std::string_view kLabelCss = R"(body{font-family:system-ui,sans-serif;margin:0;color:#1d1d1f;background:#fafafa}
.label-header{padding:1rem 2rem;background:#1d1d1f;color:#fff}
.label-header h1{margin:0 0 .25rem}
.label-meta{margin:0;font-size:.9rem;opacity:.85}
nav.panes ul{display:flex;gap:1rem;list-style:none;margin:0;padding:.75rem 2rem;background:#eee}
a.pane-link{text-decoration:none;color:#1d1d1f;font-weight:600}
a.pane-link.current{border-bottom:3px solid #1d1d1f}
main{padding:1rem 2rem;max-width:60rem}
.module{margin-bottom:1.5rem}
.badges ul{display:flex;gap:1rem;list-style:none;padding:0}
.badge-value{font-size:1.6rem;font-weight:700;display:block}
table{border-collapse:collapse}
th,td{border:1px solid #ccc;padding:.25rem .5rem;text-align:left}
.alerts,.fyis{list-style:none;padding:0}
.alert,.fyi{border-left:6px solid;padding:.25rem .75rem;margin:.5rem 0;background:#fff}
.sev-red{border-color:#c0392b}
.sev-orange{border-color:#e67e22}
.sev-yellow{border-color:#f1c40f}
.sev-green{border-color:#27ae60}
.count-red{color:#c0392b}.count-orange{color:#e67e22}.count-yellow{color:#b7950b}.count-green{color:#27ae60}
tr.row-red th{color:#c0392b}tr.row-orange th{color:#e67e22}tr.row-yellow th{color:#b7950b}tr.row-green th{color:#27ae60}
td.not-applicable{color:#888;font-style:italic}
.not-provided{color:#888}
.flag{font-weight:600}
)";

namespace detail {

inline std::string page(const Label& l, std::string_view current_file, std::string_view heading, const std::string& main) {
    std::string out;
    out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>";
    out += html::escape(l.dataset_name) + " &middot; " + html::escape(heading);
    out += "</title>\n<link rel=\"stylesheet\" href=\"assets/label.css\">\n</head>\n<body>\n";
    out += "<header class=\"label-header\">\n<h1>" + html::escape(l.dataset_name) + "</h1>\n";
    out += "<p class=\"label-meta\">Published by " + html::escape(l.publisher) +
           " &middot; Date <time class=\"date-produced\" datetime=\"" + format_date(l.date_produced) + "\">" +
           format_date(l.date_produced) + "</time> &middot; Label " + html::escape(l.label_id) + "</p>\n</header>\n";
    out += "<nav class=\"panes\">\n<ul>\n";
    for (const auto& p : kPanes) {
        out += "<li><a class=\"pane-link";
        if (p.file == current_file) out += " current";
        out += "\" href=\"" + std::string(p.file) + "\">" + html::escape(p.title) + "</a></li>\n";
    }
    out += "</ul>\n</nav>\n<main>\n" + main + "</main>\n</body>\n</html>\n";
    return out;
}

inline std::string percent(std::uint64_t part, std::uint64_t whole) {
    if (whole == 0) return "0.0%";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * static_cast<double>(part) / static_cast<double>(whole));
    return buf;
}

inline std::string render_module(const OverviewModule& m) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            std::string s;
            if constexpr (std::is_same_v<T, KeyFactsModule>) {
                s += "<section class=\"module key-facts\">\n<h2>Key facts</h2>\n<dl>\n";
                for (const auto& [k, val] : v.facts)
                    s += "<dt>" + html::escape(k) + "</dt><dd>" + html::escape(val) + "</dd>\n";
                s += "</dl>\n</section>\n";
            } else if constexpr (std::is_same_v<T, ComputedStatsModule>) {
                s += "<section class=\"module computed-stats\">\n<h2>Dataset statistics</h2>\n";
                s += "<p>Rows: <span class=\"row-count\">" + std::to_string(v.row_count) + "</span></p>\n";
                s += "<table>\n<thead><tr><th>Column</th><th>Type</th><th>Missing</th><th>Distinct</th>"
                     "<th>Min</th><th>Max</th></tr></thead>\n<tbody>\n";
                for (const auto& c : v.columns) {
                    s += "<tr><td>" + html::escape(c.name) + "</td><td>" +
                         std::string(column_type_name(c.inferred_type)) + "</td><td>" +
                         std::to_string(c.missing_count) + " (" + percent(c.missing_count, v.row_count) +
                         ")</td><td>" + std::to_string(c.distinct_count) + "</td><td>" +
                         html::escape(c.min.value_or("")) + "</td><td>" + html::escape(c.max.value_or("")) +
                         "</td></tr>\n";
                }
                s += "</tbody>\n</table>\n</section>\n";
            } else if constexpr (std::is_same_v<T, BadgesModule>) {
                s += "<section class=\"module badges\">\n<ul>\n";
                s += "<li class=\"badge\"><span class=\"badge-value\">" + std::to_string(v.use_case_count) +
                     "</span> use cases</li>\n";
                s += "<li class=\"badge\"><span class=\"badge-value\">" + std::to_string(v.alert_count) +
                     "</span> alerts</li>\n";
                s += "<li class=\"badge\"><span class=\"badge-value\">" + std::to_string(v.fyi_count) +
                     "</span> FYIs</li>\n";
                s += "</ul>\n</section>\n";
            } else {
                s += "<section class=\"module free-text\">\n<h2>" + html::escape(v.title) + "</h2>\n";
                s += html::paragraphs(v.text);
                s += "</section>\n";
            }
            return s;
        },
        m);
}

inline std::string question_link(std::string_view qid) {
    return "<p class=\"source\">From question <a href=\"dataset-info.html#" + html::anchor("q", {qid}) + "\">" +
           html::escape(qid) + "</a></p>\n";
}

inline std::string render_alert(const Alert& a, const std::string& anchor_id) {
    std::string s = "<li class=\"alert " + severity_class(a.severity) + "\" id=\"" + anchor_id +
                    "\" data-item-id=\"" + html::escape(a.id) + "\">\n";
    s += "<h4>" + html::escape(a.title) + "</h4>\n";
    s += "<p class=\"severity-label\">" + std::string(severity_label(a.severity)) + "</p>\n";
    s += html::paragraphs(a.description);
    if (a.mitigation && !is_blank(*a.mitigation))
        s += "<p class=\"mitigation\"><strong>Mitigation:</strong> " + html::escape(*a.mitigation) + "</p>\n";
    if (a.derived_from_question) s += question_link(*a.derived_from_question);
    return s + "</li>\n";
}

inline std::string render_fyi(const Fyi& f, const std::string& anchor_id) {
    std::string s = "<li class=\"fyi " + std::string(kFyiClass) + "\" id=\"" + anchor_id + "\" data-item-id=\"" +
                    html::escape(f.id) + "\">\n";
    s += "<h4>" + html::escape(f.title) + "</h4>\n";
    s += "<p class=\"severity-label\">FYI</p>\n";
    s += html::paragraphs(f.description);
    if (f.derived_from_question) s += question_link(*f.derived_from_question);
    return s + "</li>\n";
}

inline std::string item_anchor(const ResolvedView& v, std::string_view kind, std::string_view id) {
    return html::anchor(kind, {v.use_case_id, v.prediction_id, id});
}

/// Anchor of the first displayed occurrence of each alert/FYI id.
struct FirstOccurrence {
    std::unordered_map<std::string, std::string> alert, fyi;
};

inline FirstOccurrence first_occurrences(const std::vector<ResolvedView>& views) {
    FirstOccurrence out;
    for (const auto& v : views) {
        for (const auto& a : v.alerts) out.alert.try_emplace(a.id, item_anchor(v, "alert", a.id));
        for (const auto& f : v.fyis) out.fyi.try_emplace(f.id, item_anchor(v, "fyi", f.id));
    }
    return out;
}

inline std::string render_use_cases(const Label& l, const std::vector<ResolvedView>& views) {
    std::string s = "<h2>Use Cases &amp; Alerts</h2>\n";
    if (l.use_cases.empty()) return s + "<p class=\"empty\">This label lists no use cases.</p>\n";
    std::size_t next = 0;
    for (const auto& u : l.use_cases) {
        s += "<section class=\"use-case\" id=\"" + html::anchor("uc", {u.id}) + "\">\n";
        s += "<h2>" + html::escape(u.title) + "</h2>\n" + html::paragraphs(u.description);
        for (const auto& p : u.predictions) {
            const ResolvedView& v = views.at(next++);
            if (v.use_case_id != u.id || v.prediction_id != p.id)
                throw Error("RENDER_ERROR", "resolved views are not in declaration order");
            s += "<section class=\"prediction\" id=\"" + html::anchor("pair", {u.id, p.id}) +
                 "\" data-use-case=\"" + html::escape(u.id) + "\" data-prediction=\"" + html::escape(p.id) + "\">\n";
            s += "<h3>Prediction: " + html::escape(p.title) + "</h3>\n";
            s += html::paragraphs(p.method_description, "method");
            const auto& sum = v.severity_summary;
            s += "<p class=\"severity-summary\"><span class=\"count-red\">" + std::to_string(sum.red) +
                 " red</span> &middot; <span class=\"count-orange\">" + std::to_string(sum.orange) +
                 " orange</span> &middot; <span class=\"count-yellow\">" + std::to_string(sum.yellow) +
                 " yellow</span> &middot; <span class=\"count-green\">" + std::to_string(v.fyis.size()) +
                 " FYI</span></p>\n";
            if (v.alerts.empty()) {
                s += "<p class=\"empty\">No alerts for this selection.</p>\n";
            } else {
                s += "<ol class=\"alerts\">\n";
                for (const auto& a : v.alerts) s += render_alert(a, item_anchor(v, "alert", a.id));
                s += "</ol>\n";
            }
            if (!v.fyis.empty()) {
                s += "<ul class=\"fyis\">\n";
                for (const auto& f : v.fyis) s += render_fyi(f, item_anchor(v, "fyi", f.id));
                s += "</ul>\n";
            }
            s += "</section>\n";
        }
        s += "</section>\n";
    }
    return s;
}

inline std::string render_dataset_info(const Label& l, const std::vector<ResolvedView>& views) {
    auto first = first_occurrences(views);
    auto materialized = materialize_questionnaire_flags(l);
    // question id -> (kind, item id) of the item it surfaces as
    std::unordered_map<std::string, std::pair<std::string, std::string>> surfaced;
    for (const auto& a : materialized.alerts) surfaced.try_emplace(*a.derived_from_question, "alert", a.id);
    for (const auto& f : materialized.fyis) surfaced.try_emplace(*f.derived_from_question, "fyi", f.id);
    for (const auto& a : l.alerts)
        if (a.derived_from_question) surfaced.try_emplace(*a.derived_from_question, "alert", a.id);
    for (const auto& f : l.fyis)
        if (f.derived_from_question) surfaced.try_emplace(*f.derived_from_question, "fyi", f.id);

    std::string s = "<h2>Dataset Info</h2>\n";
    for (auto cat : kCategories) {
        std::string name(category_name(cat));
        std::string lower = normalize_title(name);
        s += "<section class=\"category\" id=\"cat-" + lower + "\">\n<h2>" + name + "</h2>\n";
        bool any = false;
        for (const auto& q : l.questionnaire) {
            if (q.category != cat) continue;
            if (!any) s += "<dl>\n";
            any = true;
            auto it = surfaced.find(q.question_id);
            bool flagged = q.answered() && it != surfaced.end();
            s += "<div class=\"question" + std::string(flagged ? " flagged" : "") + "\" id=\"" +
                 html::anchor("q", {q.question_id}) + "\">\n";
            s += "<dt>" + html::escape(q.question_text) + "</dt>\n";
            if (q.answered()) s += "<dd>" + html::escape(q.answer) + "</dd>\n";
            else s += "<dd><em class=\"not-provided\">Not provided</em></dd>\n";
            if (flagged) {
                const auto& [kind, id] = it->second;
                const auto& index = kind == "alert" ? first.alert : first.fyi;
                auto target = index.find(id);
                s += "<dd class=\"flag\">Also shown as " + std::string(kind == "alert" ? "an alert" : "an FYI") + ": ";
                if (target != index.end())
                    s += "<a href=\"use-cases.html#" + target->second + "\">" + html::escape(id) + "</a>";
                else
                    s += html::escape(id);
                s += "</dd>\n";
            }
            s += "</div>\n";
        }
        if (any) s += "</dl>\n";
        else s += "<p class=\"empty\">No questions in this category.</p>\n";
        s += "</section>\n";
    }
    return s;
}

inline std::string render_index(const Label& l) {
    std::string s = "<section class=\"summary\">\n";
    s += "<p>This label documents <strong>" + html::escape(l.dataset_name) + "</strong>";
    if (l.source_url) s += " (<a href=\"" + html::escape(*l.source_url) + "\">source</a>)";
    s += ". It was produced on " + format_date(l.date_produced) +
         "; check the dataset's current structure against it before relying on it.</p>\n";
    if (l.license) s += "<p>License: " + html::escape(*l.license) + "</p>\n";
    auto b = count_badges(l);
    s += "<p>" + std::to_string(b.use_case_count) + " use cases, " + std::to_string(b.alert_count) +
         " alerts, " + std::to_string(b.fyi_count) + " FYIs, " + std::to_string(l.questionnaire.size()) +
         " questionnaire answers.</p>\n";
    s += "</section>\n";
    return s;
}

}  // namespace detail

/// Renders the archival HTML form of a label from its precomputed views
/// (resolve_all order).
inline html::DocumentSet render_label_html(const Label& label, const std::vector<ResolvedView>& views) {
    auto report = validate_label(label);
    if (!report.passed()) throw RenderError(std::move(report));
    std::size_t pairs = 0;
    for (const auto& u : label.use_cases) pairs += u.predictions.size();
    if (views.size() != pairs) throw Error("RENDER_ERROR", "expected one resolved view per (use case, prediction)");

    std::string overview = "<h2>Overview</h2>\n";
    for (const auto& m : label.overview_modules) overview += detail::render_module(m);

    html::DocumentSet docs;
    docs["index.html"] = detail::page(label, "index.html", "Label", detail::render_index(label));
    docs["overview.html"] = detail::page(label, "overview.html", "Overview", overview);
    docs["use-cases.html"] =
        detail::page(label, "use-cases.html", "Use Cases & Alerts", detail::render_use_cases(label, views));
    docs["dataset-info.html"] =
        detail::page(label, "dataset-info.html", "Dataset Info", detail::render_dataset_info(label, views));
    docs["assets/label.css"] = std::string(kLabelCss);
    return docs;
}

inline html::DocumentSet render_label_html(const Label& label) {
    auto report = validate_label(label);
    if (!report.passed()) throw RenderError(std::move(report));
    return render_label_html(label, resolve_all(label));
}

}  // namespace dnl
