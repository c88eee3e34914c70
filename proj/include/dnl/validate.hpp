#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dnl/common.hpp"
#include "dnl/fingerprint.hpp"
#include "dnl/label.hpp"

namespace dnl {

enum class Level : std::uint8_t { error, warning };

struct Violation {
    Level level = Level::error;
    std::string code;
    std::string path;  // JSON pointer into the label document
    std::string message;
    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool passed() const {
        return std::none_of(violations.begin(), violations.end(),
                            [](const Violation& v) { return v.level == Level::error; });
    }
    bool has(std::string_view code) const {
        return std::any_of(violations.begin(), violations.end(),
                           [&](const Violation& v) { return v.code == code; });
    }
};

inline json to_json(const ValidationReport& r) {
    json vs = json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"code", v.code},
                      {"level", v.level == Level::error ? "error" : "warning"},
                      {"message", v.message},
                      {"path", v.path}});
    return {{"verdict", r.passed() ? "pass" : "fail"}, {"violations", std::move(vs)}};
}

/// Thrown by operations whose precondition is a label that validates.
class ValidationFailed : public Error {
public:
    explicit ValidationFailed(ValidationReport report)
        : Error("VALIDATION_FAILED", "label failed validation with " +
                                         std::to_string(report.violations.size()) + " violation(s)"),
          report_(std::move(report)) {}
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

namespace detail {

inline constexpr std::string_view kMaterializedPrefix = "q:";

class ViolationCollector {
public:
    void node() { ++seq_; }
    void error(std::string code, std::string path, std::string message) {
        add(Level::error, std::move(code), std::move(path), std::move(message));
    }
    void warning(std::string code, std::string path, std::string message) {
        add(Level::warning, std::move(code), std::move(path), std::move(message));
    }

    // Document order first, then code within a node.
    ValidationReport finish() && {
        std::stable_sort(items_.begin(), items_.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second.code < b.second.code;
        });
        ValidationReport r;
        for (auto& [seq, v] : items_) r.violations.push_back(std::move(v));
        return r;
    }

private:
    void add(Level level, std::string code, std::string path, std::string message) {
        items_.emplace_back(seq_, Violation{level, std::move(code), std::move(path), std::move(message)});
    }

    int seq_ = 0;
    std::vector<std::pair<int, Violation>> items_;
};

class LabelValidator {
public:
    explicit LabelValidator(const Label& l) : label_(l) {
        for (const auto& u : l.use_cases)
            for (const auto& p : u.predictions) prediction_owner_.emplace(p.id, u.id);
        for (const auto& q : l.questionnaire) question_ids_.insert(q.question_id);
    }

    ValidationReport run() && {
        check_header();
        check_fingerprint();
        for (std::size_t i = 0; i < label_.overview_modules.size(); ++i)
            check_module(label_.overview_modules[i], "/overview_modules/" + std::to_string(i));
        check_use_cases();
        check_alerts();
        check_fyis();
        check_questionnaire();
        return std::move(out_).finish();
    }

private:
    void check_header() {
        out_.node();
        if (is_blank(label_.label_id)) out_.error("EMPTY_LABEL_ID", "/label_id", "label_id is empty");
        if (label_.schema_version != kSchemaVersion)
            out_.error("UNSUPPORTED_SCHEMA_VERSION", "/schema_version",
                       "schema_version must be \"1.0\", got \"" + label_.schema_version + "\"");
        if (!label_.date_produced.ok())
            out_.error("BAD_DATE", "/date_produced", "date_produced is not a valid calendar date");
    }

    void check_fingerprint() {
        if (!label_.fingerprint) return;
        out_.node();
        const auto& fp = *label_.fingerprint;
        if (fp.column_names.empty()) {
            out_.error("EMPTY_FINGERPRINT", "/fingerprint/column_names",
                       "fingerprint must list at least one column");
            return;
        }
        if (sha256_hex(fingerprint_encoding(fp.column_names)) != fp.digest)
            out_.error("FINGERPRINT_DIGEST_MISMATCH", "/fingerprint/digest",
                       "digest does not match the listed column names");
    }

    void check_module(const OverviewModule& m, const std::string& path) {
        out_.node();
        if (const auto* b = std::get_if<BadgesModule>(&m)) {
            auto actual = count_badges(label_);
            auto cmp = [&](const char* field, std::uint64_t claimed, std::uint64_t real) {
                if (claimed != real)
                    out_.warning("BADGE_COUNT_MISMATCH", path + "/" + field,
                                 std::string(field) + " is " + std::to_string(claimed) +
                                     " but the label has " + std::to_string(real));
            };
            cmp("use_case_count", b->use_case_count, actual.use_case_count);
            cmp("alert_count", b->alert_count, actual.alert_count);
            cmp("fyi_count", b->fyi_count, actual.fyi_count);
        } else if (const auto* s = std::get_if<ComputedStatsModule>(&m)) {
            for (std::size_t i = 0; i < s->columns.size(); ++i) {
                const auto& c = s->columns[i];
                if (c.missing_count > s->row_count ||
                    c.distinct_count > s->row_count - c.missing_count)
                    out_.error("STATS_INCONSISTENT", path + "/columns/" + std::to_string(i),
                               "column '" + c.name + "' counts exceed row_count");
            }
        }
    }

    void check_use_cases() {
        std::unordered_set<std::string> ids, titles, prediction_ids;
        for (std::size_t i = 0; i < label_.use_cases.size(); ++i) {
            const auto& u = label_.use_cases[i];
            const std::string path = "/use_cases/" + std::to_string(i);
            out_.node();
            check_id(u.id, path, ids);
            if (is_blank(u.title)) out_.error("EMPTY_TITLE", path + "/title", "use case title is empty");
            else if (!titles.insert(normalize_title(u.title)).second)
                out_.error("DUPLICATE_USE_CASE_TITLE", path + "/title",
                           "use case title '" + u.title + "' repeats after normalization");
            if (u.predictions.empty())
                out_.error("NO_PREDICTIONS", path + "/predictions",
                           "use case '" + u.id + "' has no predictions");
            for (std::size_t j = 0; j < u.predictions.size(); ++j) {
                const auto& p = u.predictions[j];
                const std::string ppath = path + "/predictions/" + std::to_string(j);
                out_.node();
                check_id(p.id, ppath, prediction_ids);
                if (is_blank(p.title))
                    out_.error("EMPTY_PREDICTION_TITLE", ppath + "/title", "prediction title is empty");
            }
        }
    }

    void check_alerts() {
        std::unordered_set<std::string> ids;
        for (std::size_t i = 0; i < label_.alerts.size(); ++i) {
            const auto& a = label_.alerts[i];
            const std::string path = "/alerts/" + std::to_string(i);
            out_.node();
            check_id(a.id, path, ids);
            check_reserved(a.id, path);
            check_mitigation(a.severity, a.mitigation, path);
            check_derived(a.derived_from_question, path);
            check_scopes(a.scope, path + "/scope");
        }
    }

    void check_fyis() {
        std::unordered_set<std::string> ids;
        for (std::size_t i = 0; i < label_.fyis.size(); ++i) {
            const auto& f = label_.fyis[i];
            const std::string path = "/fyis/" + std::to_string(i);
            out_.node();
            check_id(f.id, path, ids);
            check_reserved(f.id, path);
            check_derived(f.derived_from_question, path);
            check_scopes(f.scope, path + "/scope");
        }
    }

    void check_questionnaire() {
        std::unordered_set<std::string> ids;
        for (std::size_t i = 0; i < label_.questionnaire.size(); ++i) {
            const auto& q = label_.questionnaire[i];
            const std::string path = "/questionnaire/" + std::to_string(i);
            out_.node();
            if (is_blank(q.question_id)) out_.error("EMPTY_ID", path + "/question_id", "question_id is empty");
            else if (!ids.insert(q.question_id).second)
                out_.error("DUPLICATE_ID", path + "/question_id",
                           "question id '" + q.question_id + "' is not unique");
            if (is_blank(q.question_text))
                out_.error("EMPTY_QUESTION_TEXT", path + "/question_text", "question_text is empty");
            if (!q.flag) continue;
            const auto& f = *q.flag;
            const std::string fpath = path + "/flag";
            out_.node();
            if (is_blank(f.summary))
                out_.error("EMPTY_FLAG_SUMMARY", fpath + "/summary", "flag summary is empty");
            if (f.kind == FlagKind::fyi) {
                if (f.severity)
                    out_.error("FYI_HAS_SEVERITY", fpath + "/severity",
                               "an FYI flag is always green and carries no severity");
                if (f.mitigation && !is_blank(*f.mitigation))
                    out_.warning("FYI_HAS_MITIGATION", fpath + "/mitigation",
                                 "an FYI needs no mitigation; the text is ignored");
            } else if (!f.severity) {
                out_.error("SEVERITY_REQUIRED", fpath + "/severity", "an alert flag needs a severity");
            } else {
                check_mitigation(*f.severity, f.mitigation, fpath);
            }
            check_scopes(f.scope, fpath + "/scope");
        }
    }

    void check_id(const std::string& id, const std::string& path, std::unordered_set<std::string>& seen) {
        if (is_blank(id)) out_.error("EMPTY_ID", path + "/id", "id is empty");
        else if (!seen.insert(id).second)
            out_.error("DUPLICATE_ID", path + "/id", "id '" + id + "' is not unique");
    }

    void check_reserved(const std::string& id, const std::string& path) {
        if (id.starts_with(kMaterializedPrefix))
            out_.error("RESERVED_ID_PREFIX", path + "/id",
                       "ids starting with \"q:\" are reserved for questionnaire-derived items");
    }

    void check_mitigation(Severity s, const std::optional<std::string>& mitigation, const std::string& path) {
        bool has_text = mitigation && !is_blank(*mitigation);
        if (s == Severity::no_known_mitigation && has_text)
            out_.error("MITIGATION_FORBIDDEN", path + "/mitigation",
                       "a red alert has no known mitigation and must not carry one");
        if (s != Severity::no_known_mitigation && !has_text)
            out_.error("MITIGATION_REQUIRED", path + "/mitigation",
                       std::string("a ") + std::string(severity_color(s)) + " alert must describe its mitigation");
    }

    void check_derived(const std::optional<std::string>& q, const std::string& path) {
        if (q && !question_ids_.contains(*q))
            out_.error("DANGLING_QUESTION", path + "/derived_from_question",
                       "question '" + *q + "' does not exist");
    }

    void check_scopes(const std::vector<Scope>& scopes, const std::string& path) {
        if (scopes.empty()) out_.error("EMPTY_SCOPE", path, "scope list is empty; use [global]");
        for (std::size_t k = 0; k < scopes.size(); ++k) {
            const std::string spath = path + "/" + std::to_string(k);
            out_.node();
            std::visit(
                [&](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, UseCaseScope>) {
                        check_use_case_ref(s.use_case, spath);
                    } else if constexpr (std::is_same_v<T, PairScope>) {
                        if (!check_use_case_ref(s.use_case, spath)) return;
                        auto it = prediction_owner_.find(s.prediction);
                        if (it == prediction_owner_.end())
                            out_.error("DANGLING_PREDICTION", spath + "/prediction",
                                       "prediction '" + s.prediction + "' does not exist");
                        else if (it->second != s.use_case)
                            out_.error("PREDICTION_USE_CASE_MISMATCH", spath + "/prediction",
                                       "prediction '" + s.prediction + "' belongs to use case '" +
                                           it->second + "', not '" + s.use_case + "'");
                    }
                },
                scopes[k]);
        }
    }

    bool check_use_case_ref(const std::string& id, const std::string& path) {
        if (label_.find_use_case(id)) return true;
        out_.error("DANGLING_USE_CASE", path + "/use_case", "use case '" + id + "' does not exist");
        return false;
    }

    const Label& label_;
    std::unordered_map<std::string, std::string> prediction_owner_;
    std::unordered_set<std::string> question_ids_;
    ViolationCollector out_;
};

}  // namespace detail

/// Every invariant violation in `label`, in document order then code.
inline ValidationReport validate_label(const Label& label) {
    return detail::LabelValidator(label).run();
}

inline void require_valid(const Label& label) {
    auto report = validate_label(label);
    if (!report.passed()) throw ValidationFailed(std::move(report));
}

}  // namespace dnl
