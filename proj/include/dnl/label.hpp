#pragma once

// Label document model: the three panes (overview modules, use cases with
// alerts/FYIs, dataset-info questionnaire) plus the date and structural
// fingerprint that let a consumer judge whether the label still applies.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dnl/common.hpp"

namespace dnl {

inline constexpr std::string_view kSchemaVersion = "1.0";

// Declared in ascending risk so that the enum's natural order is the
// display ranking: no_known_mitigation > partial_mitigation > mitigation_known.
enum class Severity : std::uint8_t {
    mitigation_known = 0,    // yellow
    partial_mitigation = 1,  // orange
    no_known_mitigation = 2, // red
};

inline constexpr std::array<Severity, 3> kSeveritiesDescending{
    Severity::no_known_mitigation, Severity::partial_mitigation, Severity::mitigation_known};

inline std::string_view severity_color(Severity s) {
    switch (s) {
        case Severity::no_known_mitigation: return "red";
        case Severity::partial_mitigation: return "orange";
        case Severity::mitigation_known: return "yellow";
    }
    return "red";
}

inline std::optional<Severity> severity_from_color(std::string_view c) {
    if (c == "red") return Severity::no_known_mitigation;
    if (c == "orange") return Severity::partial_mitigation;
    if (c == "yellow") return Severity::mitigation_known;
    return std::nullopt;
}

/// FYIs are always rendered with this color; it is not a Severity.
inline constexpr std::string_view kFyiColor = "green";

struct GlobalScope {
    bool operator==(const GlobalScope&) const = default;
};
struct UseCaseScope {
    std::string use_case;
    bool operator==(const UseCaseScope&) const = default;
};
struct PairScope {
    std::string use_case;
    std::string prediction;
    bool operator==(const PairScope&) const = default;
};
using Scope = std::variant<GlobalScope, UseCaseScope, PairScope>;

struct Prediction {
    std::string id;
    std::string title;
    std::string method_description;
    bool operator==(const Prediction&) const = default;
};

struct UseCase {
    std::string id;
    std::string title;
    std::string description;
    std::vector<Prediction> predictions;
    bool operator==(const UseCase&) const = default;
};

struct Alert {
    std::string id;
    std::string title;
    std::string description;
    Severity severity = Severity::no_known_mitigation;
    std::optional<std::string> mitigation;
    std::vector<Scope> scope;
    std::optional<std::string> derived_from_question;
    bool operator==(const Alert&) const = default;
};

struct Fyi {
    std::string id;
    std::string title;
    std::string description;
    std::vector<Scope> scope;
    std::optional<std::string> derived_from_question;
    bool operator==(const Fyi&) const = default;
};

enum class Category : std::uint8_t { Description, Composition, Provenance, Collection, Management };

inline constexpr std::array<Category, 5> kCategories{Category::Description, Category::Composition,
                                                     Category::Provenance, Category::Collection,
                                                     Category::Management};

inline std::string_view category_name(Category c) {
    switch (c) {
        case Category::Description: return "Description";
        case Category::Composition: return "Composition";
        case Category::Provenance: return "Provenance";
        case Category::Collection: return "Collection";
        case Category::Management: return "Management";
    }
    return "Description";
}

inline std::optional<Category> category_from_name(std::string_view s) {
    for (auto c : kCategories)
        if (category_name(c) == s) return c;
    return std::nullopt;
}

enum class FlagKind : std::uint8_t { alert, fyi };

/// Turns an answered question into an Alert or FYI. `severity` is kept even
/// for kind fyi so that validation can report it instead of parse dropping it.
struct FlagRule {
    FlagKind kind = FlagKind::alert;
    std::optional<Severity> severity;
    std::optional<std::string> mitigation;
    std::vector<Scope> scope;
    std::string summary;
    bool operator==(const FlagRule&) const = default;
};

struct QuestionnaireAnswer {
    std::string question_id;
    Category category = Category::Description;
    std::string question_text;
    std::string answer;  // empty = unanswered
    std::optional<FlagRule> flag;
    bool operator==(const QuestionnaireAnswer&) const = default;

    bool answered() const { return !is_blank(answer); }
};

struct StructuralFingerprint {
    std::vector<std::string> column_names;
    std::string digest;  // 64 lowercase hex chars
    bool operator==(const StructuralFingerprint&) const = default;
};

enum class ColumnType : std::uint8_t { integer, floating, boolean, date, string };

inline std::string_view column_type_name(ColumnType t) {
    switch (t) {
        case ColumnType::integer: return "integer";
        case ColumnType::floating: return "float";
        case ColumnType::boolean: return "boolean";
        case ColumnType::date: return "date";
        case ColumnType::string: return "string";
    }
    return "string";
}

inline std::optional<ColumnType> column_type_from_name(std::string_view s) {
    for (auto t : {ColumnType::integer, ColumnType::floating, ColumnType::boolean,
                   ColumnType::date, ColumnType::string})
        if (column_type_name(t) == s) return t;
    return std::nullopt;
}

/// Per-column statistics embedded in a label. Counts only, so the label
/// carries no floating point values.
struct ColumnSummary {
    std::string name;
    ColumnType inferred_type = ColumnType::string;
    std::uint64_t missing_count = 0;
    std::uint64_t distinct_count = 0;
    std::optional<std::string> min;
    std::optional<std::string> max;
    bool operator==(const ColumnSummary&) const = default;
};

struct KeyFactsModule {
    std::map<std::string, std::string> facts;
    bool operator==(const KeyFactsModule&) const = default;
};
struct ComputedStatsModule {
    std::uint64_t row_count = 0;
    std::vector<ColumnSummary> columns;
    bool operator==(const ComputedStatsModule&) const = default;
};
struct BadgesModule {
    std::uint64_t use_case_count = 0;
    std::uint64_t alert_count = 0;
    std::uint64_t fyi_count = 0;
    bool operator==(const BadgesModule&) const = default;
};
struct FreeTextModule {
    std::string title;
    std::string text;
    bool operator==(const FreeTextModule&) const = default;
};
using OverviewModule = std::variant<KeyFactsModule, ComputedStatsModule, BadgesModule, FreeTextModule>;

struct Label {
    std::string label_id;
    std::string schema_version{kSchemaVersion};
    std::string dataset_name;
    std::string publisher;
    std::optional<std::string> source_url;
    std::optional<std::string> license;
    Date date_produced{};
    std::optional<StructuralFingerprint> fingerprint;
    std::vector<OverviewModule> overview_modules;
    std::vector<UseCase> use_cases;
    std::vector<Alert> alerts;
    std::vector<Fyi> fyis;
    std::vector<QuestionnaireAnswer> questionnaire;
    bool operator==(const Label&) const = default;

    const UseCase* find_use_case(std::string_view id) const {
        for (const auto& u : use_cases)
            if (u.id == id) return &u;
        return nullptr;
    }
};

inline const Prediction* find_prediction(const UseCase& u, std::string_view id) {
    for (const auto& p : u.predictions)
        if (p.id == id) return &p;
    return nullptr;
}

/// Badge counts a label should carry for itself.
inline BadgesModule count_badges(const Label& l) {
    return {l.use_cases.size(), l.alerts.size(), l.fyis.size()};
}

}  // namespace dnl
