#pragma once

// Use-case/prediction scoped resolution of alerts and FYIs.

#include <algorithm>
#include <array>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dnl/label.hpp"
#include "dnl/label_io.hpp"
#include "dnl/validate.hpp"

namespace dnl {

struct SeveritySummary {
    std::uint64_t red = 0, orange = 0, yellow = 0;
    bool operator==(const SeveritySummary&) const = default;

    void add(Severity s) {
        switch (s) {
            case Severity::no_known_mitigation: ++red; break;
            case Severity::partial_mitigation: ++orange; break;
            case Severity::mitigation_known: ++yellow; break;
        }
    }
};

inline json to_json(const SeveritySummary& s) {
    return {{"red", s.red}, {"orange", s.orange}, {"yellow", s.yellow}};
}

struct ResolvedView {
    std::string use_case_id;
    std::string prediction_id;
    std::vector<Alert> alerts;
    std::vector<Fyi> fyis;
    SeveritySummary severity_summary;
    bool operator==(const ResolvedView&) const = default;
};

inline json to_json(const ResolvedView& v) {
    json alerts = json::array(), fyis = json::array();
    for (const auto& a : v.alerts) alerts.push_back(to_json(a));
    for (const auto& f : v.fyis) fyis.push_back(to_json(f));
    return {{"use_case_id", v.use_case_id},
            {"prediction_id", v.prediction_id},
            {"alerts", std::move(alerts)},
            {"fyis", std::move(fyis)},
            {"severity_summary", to_json(v.severity_summary)}};
}

inline std::string serialize_resolved_view(const ResolvedView& v) { return canonical_dump(to_json(v)); }

enum class ResolveErrorKind { UnknownUseCase, UnknownPrediction, PredictionNotInUseCase };

class ResolveError : public Error {
public:
    ResolveError(ResolveErrorKind kind, const std::string& message)
        : Error(code_for(kind), message), kind_(kind) {}
    ResolveErrorKind kind() const noexcept { return kind_; }

private:
    static std::string code_for(ResolveErrorKind k) {
        switch (k) {
            case ResolveErrorKind::UnknownUseCase: return "UNKNOWN_USE_CASE";
            case ResolveErrorKind::UnknownPrediction: return "UNKNOWN_PREDICTION";
            case ResolveErrorKind::PredictionNotInUseCase: return "PREDICTION_NOT_IN_USE_CASE";
        }
        return "UNKNOWN_USE_CASE";
    }
    ResolveErrorKind kind_;
};

/// Use cases in declaration order with their predictions.
inline std::vector<std::pair<UseCase, std::vector<Prediction>>> list_use_cases(const Label& label) {
    std::vector<std::pair<UseCase, std::vector<Prediction>>> out;
    out.reserve(label.use_cases.size());
    for (const auto& u : label.use_cases) out.emplace_back(u, u.predictions);
    return out;
}

inline json use_cases_to_json(const Label& label) {
    json a = json::array();
    for (const auto& [u, preds] : list_use_cases(label)) a.push_back(to_json(u));
    return a;
}

struct MaterializedItems {
    std::vector<Alert> alerts;
    std::vector<Fyi> fyis;
};

/// Alerts and FYIs generated from answered questions carrying a flag rule.
/// A question already linked from an authored alert or FYI materializes nothing.
inline MaterializedItems materialize_questionnaire_flags(const Label& label) {
    std::unordered_set<std::string> authored_links;
    for (const auto& a : label.alerts)
        if (a.derived_from_question) authored_links.insert(*a.derived_from_question);
    for (const auto& f : label.fyis)
        if (f.derived_from_question) authored_links.insert(*f.derived_from_question);

    MaterializedItems out;
    for (const auto& q : label.questionnaire) {
        if (!q.flag || !q.answered() || authored_links.contains(q.question_id)) continue;
        const auto& rule = *q.flag;
        std::string id = std::string(detail::kMaterializedPrefix) + q.question_id;
        if (rule.kind == FlagKind::alert) {
            Alert a;
            a.id = std::move(id);
            a.title = rule.summary;
            a.description = q.answer;
            a.severity = rule.severity.value_or(Severity::no_known_mitigation);
            a.mitigation = rule.mitigation;
            a.scope = rule.scope;
            a.derived_from_question = q.question_id;
            out.alerts.push_back(std::move(a));
        } else {
            out.fyis.push_back({std::move(id), rule.summary, q.answer, rule.scope, q.question_id});
        }
    }
    return out;
}

inline bool scope_matches(const std::vector<Scope>& scopes, std::string_view use_case, std::string_view prediction) {
    return std::any_of(scopes.begin(), scopes.end(), [&](const Scope& s) {
        if (std::holds_alternative<GlobalScope>(s)) return true;
        if (const auto* u = std::get_if<UseCaseScope>(&s)) return u->use_case == use_case;
        const auto& p = std::get<PairScope>(s);
        return p.use_case == use_case && p.prediction == prediction;
    });
}

namespace detail {

inline void check_selection(const Label& label, const std::string& use_case_id, const std::string& prediction_id) {
    const UseCase* u = label.find_use_case(use_case_id);
    if (!u) throw ResolveError(ResolveErrorKind::UnknownUseCase, "unknown use case '" + use_case_id + "'");
    if (find_prediction(*u, prediction_id)) return;
    for (const auto& other : label.use_cases)
        if (find_prediction(other, prediction_id))
            throw ResolveError(ResolveErrorKind::PredictionNotInUseCase,
                               "prediction '" + prediction_id + "' belongs to use case '" + other.id +
                                   "', not '" + use_case_id + "'");
    throw ResolveError(ResolveErrorKind::UnknownPrediction, "unknown prediction '" + prediction_id + "'");
}

}  // namespace detail

/// Alerts and FYIs relevant to one (use case, prediction) selection, alerts
/// ordered red, orange, yellow; authored before materialized within a color.
inline ResolvedView resolve(const Label& label, const std::string& use_case_id, const std::string& prediction_id,
                            const MaterializedItems& materialized) {
    detail::check_selection(label, use_case_id, prediction_id);
    ResolvedView v;
    v.use_case_id = use_case_id;
    v.prediction_id = prediction_id;

    for (auto sev : kSeveritiesDescending) {
        for (const auto* list : {&label.alerts, &materialized.alerts})
            for (const auto& a : *list)
                if (a.severity == sev && scope_matches(a.scope, use_case_id, prediction_id)) v.alerts.push_back(a);
    }
    for (const auto* list : {&label.fyis, &materialized.fyis})
        for (const auto& f : *list)
            if (scope_matches(f.scope, use_case_id, prediction_id)) v.fyis.push_back(f);
    for (const auto& a : v.alerts) v.severity_summary.add(a.severity);
    return v;
}

inline ResolvedView resolve(const Label& label, const std::string& use_case_id, const std::string& prediction_id) {
    return resolve(label, use_case_id, prediction_id, materialize_questionnaire_flags(label));
}

/// Every (use case, prediction) view of a label, in declaration order.
inline std::vector<ResolvedView> resolve_all(const Label& label) {
    auto materialized = materialize_questionnaire_flags(label);
    std::vector<ResolvedView> out;
    for (const auto& u : label.use_cases)
        for (const auto& p : u.predictions) out.push_back(resolve(label, u.id, p.id, materialized));
    return out;
}

}  // namespace dnl
