#pragma once

// Canonical JSON encoding of label documents (`*.label.json`).

#include <initializer_list>
#include <set>
#include <string>
#include <string_view>

#include "dnl/common.hpp"
#include "dnl/label.hpp"
#include "dnl/validate.hpp"

namespace dnl {

enum class ParseErrorKind { MalformedSyntax, MissingField, UnknownField, BadEnumValue, BadDate, WrongType };

inline std::string_view parse_error_code(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::MalformedSyntax: return "MALFORMED_SYNTAX";
        case ParseErrorKind::MissingField: return "MISSING_FIELD";
        case ParseErrorKind::UnknownField: return "UNKNOWN_FIELD";
        case ParseErrorKind::BadEnumValue: return "BAD_ENUM_VALUE";
        case ParseErrorKind::BadDate: return "BAD_DATE";
        case ParseErrorKind::WrongType: return "WRONG_TYPE";
    }
    return "MALFORMED_SYNTAX";
}

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::string path, const std::string& detail)
        : Error(std::string(parse_error_code(kind)),
                std::string(parse_error_code(kind)) + (path.empty() ? "" : " at " + path) + ": " + detail),
          kind_(kind),
          path_(std::move(path)) {}

    ParseErrorKind kind() const noexcept { return kind_; }
    /// JSON pointer of the offending field (empty for syntax errors).
    const std::string& path() const noexcept { return path_; }

private:
    ParseErrorKind kind_;
    std::string path_;
};

// ---------------------------------------------------------------- encoding

inline json to_json(const Scope& s) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GlobalScope>) return {{"kind", "global"}};
            else if constexpr (std::is_same_v<T, UseCaseScope>)
                return {{"kind", "use_case"}, {"use_case", v.use_case}};
            else return {{"kind", "pair"}, {"use_case", v.use_case}, {"prediction", v.prediction}};
        },
        s);
}

inline json to_json(const std::vector<Scope>& scopes) {
    json a = json::array();
    for (const auto& s : scopes) a.push_back(to_json(s));
    return a;
}

inline json to_json(const Alert& a) {
    json j = {{"id", a.id},
              {"title", a.title},
              {"description", a.description},
              {"severity", severity_color(a.severity)},
              {"scope", to_json(a.scope)}};
    if (a.mitigation) j["mitigation"] = *a.mitigation;
    if (a.derived_from_question) j["derived_from_question"] = *a.derived_from_question;
    return j;
}

inline json to_json(const Fyi& f) {
    json j = {{"id", f.id}, {"title", f.title}, {"description", f.description}, {"scope", to_json(f.scope)}};
    if (f.derived_from_question) j["derived_from_question"] = *f.derived_from_question;
    return j;
}

inline json to_json(const Prediction& p) {
    return {{"id", p.id}, {"title", p.title}, {"method_description", p.method_description}};
}

inline json to_json(const UseCase& u) {
    json preds = json::array();
    for (const auto& p : u.predictions) preds.push_back(to_json(p));
    return {{"id", u.id}, {"title", u.title}, {"description", u.description}, {"predictions", std::move(preds)}};
}

inline json to_json(const StructuralFingerprint& fp) {
    return {{"column_names", fp.column_names}, {"digest", fp.digest}};
}

inline json to_json(const ColumnSummary& c) {
    json j = {{"name", c.name},
              {"inferred_type", column_type_name(c.inferred_type)},
              {"missing_count", c.missing_count},
              {"distinct_count", c.distinct_count}};
    if (c.min) j["min"] = *c.min;
    if (c.max) j["max"] = *c.max;
    return j;
}

inline json to_json(const OverviewModule& m) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, KeyFactsModule>) {
                return {{"kind", "key_facts"}, {"facts", v.facts}};
            } else if constexpr (std::is_same_v<T, ComputedStatsModule>) {
                json cols = json::array();
                for (const auto& c : v.columns) cols.push_back(to_json(c));
                return {{"kind", "computed_stats"}, {"row_count", v.row_count}, {"columns", std::move(cols)}};
            } else if constexpr (std::is_same_v<T, BadgesModule>) {
                return {{"kind", "badges"},
                        {"use_case_count", v.use_case_count},
                        {"alert_count", v.alert_count},
                        {"fyi_count", v.fyi_count}};
            } else {
                return {{"kind", "free_text"}, {"title", v.title}, {"text", v.text}};
            }
        },
        m);
}

inline json to_json(const FlagRule& f) {
    json j = {{"kind", f.kind == FlagKind::alert ? "alert" : "fyi"},
              {"scope", to_json(f.scope)},
              {"summary", f.summary}};
    if (f.severity) j["severity"] = severity_color(*f.severity);
    if (f.mitigation) j["mitigation"] = *f.mitigation;
    return j;
}

inline json to_json(const QuestionnaireAnswer& q) {
    json j = {{"question_id", q.question_id},
              {"category", category_name(q.category)},
              {"question_text", q.question_text},
              {"answer", q.answer}};
    if (q.flag) j["flag"] = to_json(*q.flag);
    return j;
}

/// Structural JSON of a label; no validation.
inline json to_json(const Label& l) {
    auto arr = [](const auto& items) {
        json a = json::array();
        for (const auto& x : items) a.push_back(to_json(x));
        return a;
    };
    json j = {{"label_id", l.label_id},
              {"schema_version", l.schema_version},
              {"dataset_name", l.dataset_name},
              {"publisher", l.publisher},
              {"date_produced", format_date(l.date_produced)},
              {"overview_modules", arr(l.overview_modules)},
              {"use_cases", arr(l.use_cases)},
              {"alerts", arr(l.alerts)},
              {"fyis", arr(l.fyis)},
              {"questionnaire", arr(l.questionnaire)}};
    if (l.source_url) j["source_url"] = *l.source_url;
    if (l.license) j["license"] = *l.license;
    if (l.fingerprint) j["fingerprint"] = to_json(*l.fingerprint);
    return j;
}

/// Canonical bytes of a valid label. Throws ValidationFailed otherwise.
inline std::string serialize_label(const Label& label) {
    require_valid(label);
    return canonical_dump(to_json(label));
}

// ---------------------------------------------------------------- decoding

namespace detail {

/// Reads fields out of one JSON object and rejects keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ParseError(ParseErrorKind::WrongType, path_or_root(), "expected an object");
    }

    std::string child(std::string_view key) const { return path_ + "/" + std::string(key); }

    const json* optional(std::string_view key) {
        known_.insert(std::string(key));
        auto it = j_.find(std::string(key));
        return it == j_.end() ? nullptr : &*it;
    }

    const json& required(std::string_view key) {
        const json* v = optional(key);
        if (!v) throw ParseError(ParseErrorKind::MissingField, child(key), "required field is missing");
        return *v;
    }

    std::string string(std::string_view key) { return as_string(required(key), child(key)); }

    std::optional<std::string> opt_string(std::string_view key) {
        const json* v = optional(key);
        if (!v) return std::nullopt;
        return as_string(*v, child(key));
    }

    std::uint64_t count(std::string_view key) {
        const json& v = required(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
        throw ParseError(ParseErrorKind::WrongType, child(key), "expected a nonnegative integer");
    }

    const json& array(std::string_view key) {
        const json& v = required(key);
        if (!v.is_array()) throw ParseError(ParseErrorKind::WrongType, child(key), "expected an array");
        return v;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!known_.contains(it.key()))
                throw ParseError(ParseErrorKind::UnknownField, child(it.key()), "unknown field");
    }

    static std::string as_string(const json& v, const std::string& path) {
        if (!v.is_string()) throw ParseError(ParseErrorKind::WrongType, path, "expected a string");
        return v.get<std::string>();
    }

private:
    std::string path_or_root() const { return path_.empty() ? "/" : path_; }

    const json& j_;
    std::string path_;
    std::set<std::string> known_;
};

inline Severity parse_severity(const json& v, const std::string& path) {
    auto s = ObjectReader::as_string(v, path);
    auto sev = severity_from_color(s);
    if (!sev) throw ParseError(ParseErrorKind::BadEnumValue, path, "unknown severity \"" + s + "\"");
    return *sev;
}

inline Scope parse_scope(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    auto kind = r.string("kind");
    Scope out;
    if (kind == "global") {
        out = GlobalScope{};
    } else if (kind == "use_case") {
        out = UseCaseScope{r.string("use_case")};
    } else if (kind == "pair") {
        auto u = r.string("use_case");
        out = PairScope{std::move(u), r.string("prediction")};
    } else {
        throw ParseError(ParseErrorKind::BadEnumValue, r.child("kind"), "unknown scope kind \"" + kind + "\"");
    }
    r.finish();
    return out;
}

inline std::vector<Scope> parse_scopes(ObjectReader& r, std::string_view key) {
    std::vector<Scope> out;
    const auto& a = r.array(key);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(parse_scope(a[i], r.child(key) + "/" + std::to_string(i)));
    return out;
}

template <class T, class F>
std::vector<T> parse_list(ObjectReader& r, std::string_view key, F&& parse_one) {
    std::vector<T> out;
    const auto& a = r.array(key);
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(parse_one(a[i], r.child(key) + "/" + std::to_string(i)));
    return out;
}

inline Prediction parse_prediction(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    Prediction p;
    p.id = r.string("id");
    p.title = r.string("title");
    p.method_description = r.string("method_description");
    r.finish();
    return p;
}

inline UseCase parse_use_case(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    UseCase u;
    u.id = r.string("id");
    u.title = r.string("title");
    u.description = r.string("description");
    u.predictions = parse_list<Prediction>(r, "predictions", parse_prediction);
    r.finish();
    return u;
}

inline Alert parse_alert(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    Alert a;
    a.id = r.string("id");
    a.title = r.string("title");
    a.description = r.string("description");
    a.severity = parse_severity(r.required("severity"), r.child("severity"));
    a.mitigation = r.opt_string("mitigation");
    a.scope = parse_scopes(r, "scope");
    a.derived_from_question = r.opt_string("derived_from_question");
    r.finish();
    return a;
}

inline Fyi parse_fyi(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    Fyi f;
    f.id = r.string("id");
    f.title = r.string("title");
    f.description = r.string("description");
    f.scope = parse_scopes(r, "scope");
    f.derived_from_question = r.opt_string("derived_from_question");
    r.finish();
    return f;
}

inline FlagRule parse_flag(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    FlagRule f;
    auto kind = r.string("kind");
    if (kind == "alert") f.kind = FlagKind::alert;
    else if (kind == "fyi") f.kind = FlagKind::fyi;
    else throw ParseError(ParseErrorKind::BadEnumValue, r.child("kind"), "unknown flag kind \"" + kind + "\"");
    if (const json* s = r.optional("severity")) f.severity = parse_severity(*s, r.child("severity"));
    f.mitigation = r.opt_string("mitigation");
    f.scope = parse_scopes(r, "scope");
    f.summary = r.string("summary");
    r.finish();
    return f;
}

inline QuestionnaireAnswer parse_answer(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    QuestionnaireAnswer q;
    q.question_id = r.string("question_id");
    auto cat = r.string("category");
    auto c = category_from_name(cat);
    if (!c) throw ParseError(ParseErrorKind::BadEnumValue, r.child("category"), "unknown category \"" + cat + "\"");
    q.category = *c;
    q.question_text = r.string("question_text");
    q.answer = r.string("answer");
    if (const json* f = r.optional("flag")) q.flag = parse_flag(*f, r.child("flag"));
    r.finish();
    return q;
}

inline ColumnSummary parse_column_summary(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    ColumnSummary c;
    c.name = r.string("name");
    auto t = r.string("inferred_type");
    auto ty = column_type_from_name(t);
    if (!ty) throw ParseError(ParseErrorKind::BadEnumValue, r.child("inferred_type"), "unknown type \"" + t + "\"");
    c.inferred_type = *ty;
    c.missing_count = r.count("missing_count");
    c.distinct_count = r.count("distinct_count");
    c.min = r.opt_string("min");
    c.max = r.opt_string("max");
    r.finish();
    return c;
}

inline OverviewModule parse_module(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    auto kind = r.string("kind");
    OverviewModule out;
    if (kind == "key_facts") {
        KeyFactsModule m;
        const json& facts = r.required("facts");
        if (!facts.is_object()) throw ParseError(ParseErrorKind::WrongType, r.child("facts"), "expected an object");
        for (auto it = facts.begin(); it != facts.end(); ++it)
            m.facts.emplace(it.key(), ObjectReader::as_string(*it, r.child("facts") + "/" + it.key()));
        out = std::move(m);
    } else if (kind == "computed_stats") {
        ComputedStatsModule m;
        m.row_count = r.count("row_count");
        m.columns = parse_list<ColumnSummary>(r, "columns", parse_column_summary);
        out = std::move(m);
    } else if (kind == "badges") {
        BadgesModule m;
        m.use_case_count = r.count("use_case_count");
        m.alert_count = r.count("alert_count");
        m.fyi_count = r.count("fyi_count");
        out = m;
    } else if (kind == "free_text") {
        FreeTextModule m;
        m.title = r.string("title");
        m.text = r.string("text");
        out = std::move(m);
    } else {
        throw ParseError(ParseErrorKind::BadEnumValue, r.child("kind"), "unknown module kind \"" + kind + "\"");
    }
    r.finish();
    return out;
}

inline StructuralFingerprint parse_fingerprint(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    StructuralFingerprint fp;
    const auto& names = r.array("column_names");
    for (std::size_t i = 0; i < names.size(); ++i)
        fp.column_names.push_back(ObjectReader::as_string(names[i], r.child("column_names") + "/" + std::to_string(i)));
    fp.digest = r.string("digest");
    r.finish();
    return fp;
}

inline json parse_json_bytes(std::string_view bytes) {
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError(ParseErrorKind::MalformedSyntax, "", e.what());
    }
}

}  // namespace detail

/// Structural decode of a label document. Semantic checks live in validate_label.
inline Label label_from_json(const json& j) {
    using namespace detail;
    ObjectReader r(j, "");
    Label l;
    l.label_id = r.string("label_id");
    l.schema_version = r.string("schema_version");
    l.dataset_name = r.string("dataset_name");
    l.publisher = r.string("publisher");
    l.source_url = r.opt_string("source_url");
    l.license = r.opt_string("license");
    auto date = r.string("date_produced");
    auto d = parse_iso_date(date);
    if (!d) throw ParseError(ParseErrorKind::BadDate, "/date_produced", "\"" + date + "\" is not a YYYY-MM-DD date");
    l.date_produced = *d;
    if (const json* fp = r.optional("fingerprint")) l.fingerprint = parse_fingerprint(*fp, "/fingerprint");
    l.overview_modules = parse_list<OverviewModule>(r, "overview_modules", parse_module);
    l.use_cases = parse_list<UseCase>(r, "use_cases", parse_use_case);
    l.alerts = parse_list<Alert>(r, "alerts", parse_alert);
    l.fyis = parse_list<Fyi>(r, "fyis", parse_fyi);
    l.questionnaire = parse_list<QuestionnaireAnswer>(r, "questionnaire", parse_answer);
    r.finish();
    return l;
}

inline Label parse_label(std::string_view bytes) { return label_from_json(detail::parse_json_bytes(bytes)); }

/// A question bank: an array of {question_id, category, question_text}.
/// Entries come back unanswered and unflagged, ready to be filled in.
inline std::vector<QuestionnaireAnswer> parse_question_bank(std::string_view bytes) {
    auto j = detail::parse_json_bytes(bytes);
    if (!j.is_array()) throw ParseError(ParseErrorKind::WrongType, "/", "expected an array");
    std::vector<QuestionnaireAnswer> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        detail::ObjectReader r(j[i], "/" + std::to_string(i));
        QuestionnaireAnswer q;
        q.question_id = r.string("question_id");
        auto cat = r.string("category");
        auto c = category_from_name(cat);
        if (!c) throw ParseError(ParseErrorKind::BadEnumValue, r.child("category"), "unknown category \"" + cat + "\"");
        q.category = *c;
        q.question_text = r.string("question_text");
        r.finish();
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace dnl
