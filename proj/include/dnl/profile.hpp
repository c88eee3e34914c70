#pragma once

// Single-pass CSV profiling, structural fingerprints, and the staleness check
// that compares a label's fingerprint against a live dataset.

#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dnl/common.hpp"
#include "dnl/csv.hpp"
#include "dnl/fingerprint.hpp"
#include "dnl/label.hpp"

namespace dnl {

struct ColumnProfile {
    std::string name;
    ColumnType inferred_type = ColumnType::string;
    std::uint64_t missing_count = 0;
    double missing_fraction = 0.0;
    std::uint64_t distinct_count = 0;
    std::optional<std::string> min;  // original cell text; numeric and date columns only
    std::optional<std::string> max;
    bool operator==(const ColumnProfile&) const = default;
};

struct DatasetProfile {
    std::uint64_t row_count = 0;
    std::vector<ColumnProfile> columns;
    StructuralFingerprint fingerprint;
    Timestamp profiled_at{};
    bool operator==(const DatasetProfile&) const = default;
};

// ---------------------------------------------------------------- cell rules

/// Empty, NA, N/A, null, NaN in any letter case.
inline bool is_missing_token(std::string_view v) {
    static constexpr std::string_view kTokens[] = {"", "na", "n/a", "null", "nan"};
    for (auto t : kTokens) {
        if (t.size() != v.size()) continue;
        bool eq = true;
        for (std::size_t i = 0; i < t.size() && eq; ++i)
            eq = std::tolower(static_cast<unsigned char>(v[i])) == t[i];
        if (eq) return true;
    }
    return false;
}

inline std::optional<std::int64_t> parse_integer(std::string_view v) {
    std::string_view digits = v;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) digits.remove_prefix(1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    std::string_view body = v[0] == '+' ? v.substr(1) : v;
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
    if (ec != std::errc{} || ptr != body.data() + body.size()) return std::nullopt;
    return out;
}

/// Decimal or scientific notation only; no inf/nan/hex spellings.
inline std::optional<double> parse_float(std::string_view v) {
    std::size_t i = 0;
    auto digits = [&] {
        std::size_t start = i;
        while (i < v.size() && std::isdigit(static_cast<unsigned char>(v[i]))) ++i;
        return i - start;
    };
    if (i < v.size() && (v[i] == '+' || v[i] == '-')) ++i;
    std::size_t mantissa = digits();
    if (i < v.size() && v[i] == '.') {
        ++i;
        mantissa += digits();
    }
    if (mantissa == 0) return std::nullopt;
    if (i < v.size() && (v[i] == 'e' || v[i] == 'E')) {
        ++i;
        if (i < v.size() && (v[i] == '+' || v[i] == '-')) ++i;
        if (digits() == 0) return std::nullopt;
    }
    if (i != v.size()) return std::nullopt;
    std::string_view body = v[0] == '+' ? v.substr(1) : v;
    double out = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
    if (ec != std::errc{} || ptr != body.data() + body.size() || !std::isfinite(out)) return std::nullopt;
    return out;
}

inline bool is_boolean_token(std::string_view v) {
    if (v.size() != 4 && v.size() != 5) return false;
    std::string lower(v);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower == "true" || lower == "false";
}

/// Most specific type every value satisfies: integer, float, boolean, date,
/// then string. An empty list is string.
inline ColumnType infer_column_type(const std::vector<std::string>& non_missing_values) {
    if (non_missing_values.empty()) return ColumnType::string;
    auto all = [&](auto pred) {
        return std::all_of(non_missing_values.begin(), non_missing_values.end(), pred);
    };
    if (all([](const std::string& s) { return parse_integer(s).has_value(); })) return ColumnType::integer;
    if (all([](const std::string& s) { return parse_float(s).has_value(); })) return ColumnType::floating;
    if (all([](const std::string& s) { return is_boolean_token(s); })) return ColumnType::boolean;
    if (all([](const std::string& s) { return parse_iso_date(s).has_value(); })) return ColumnType::date;
    return ColumnType::string;
}

// ---------------------------------------------------------------- profiling

namespace detail {

template <class T>
struct Extremes {
    std::optional<std::pair<T, std::string>> lo, hi;
    void add(const T& v, const std::string& text) {
        if (!lo || v < lo->first) lo.emplace(v, text);
        if (!hi || hi->first < v) hi.emplace(v, text);
    }
};

/// Streaming state for one column. Type candidates are narrowed per value so
/// the final type equals infer_column_type over all non-missing cells.
struct ColumnAccumulator {
    std::string name;
    std::uint64_t missing = 0;
    std::uint64_t seen = 0;
    std::unordered_set<std::string> distinct;
    bool can_int = true, can_float = true, can_bool = true, can_date = true;
    Extremes<std::int64_t> ints;
    Extremes<double> floats;
    Extremes<std::string> dates;

    void add(const std::string& cell) {
        if (is_missing_token(cell)) {
            ++missing;
            return;
        }
        ++seen;
        distinct.insert(cell);
        if (can_int) {
            if (auto v = parse_integer(cell)) ints.add(*v, cell);
            else can_int = false;
        }
        if (can_float) {
            if (auto v = parse_float(cell)) floats.add(*v, cell);
            else can_float = false;
        }
        if (can_bool && !is_boolean_token(cell)) can_bool = false;
        if (can_date) {
            // ISO dates order lexicographically
            if (parse_iso_date(cell)) dates.add(cell, cell);
            else can_date = false;
        }
    }

    ColumnProfile finish(std::uint64_t rows) const {
        ColumnProfile p;
        p.name = name;
        p.missing_count = missing;
        p.missing_fraction = rows == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(rows);
        p.distinct_count = distinct.size();
        auto take = [&](const auto& ex) {
            if (ex.lo) p.min = ex.lo->second;
            if (ex.hi) p.max = ex.hi->second;
        };
        if (seen == 0) p.inferred_type = ColumnType::string;
        else if (can_int) { p.inferred_type = ColumnType::integer; take(ints); }
        else if (can_float) { p.inferred_type = ColumnType::floating; take(floats); }
        else if (can_bool) p.inferred_type = ColumnType::boolean;
        else if (can_date) { p.inferred_type = ColumnType::date; take(dates); }
        else p.inferred_type = ColumnType::string;
        return p;
    }
};

}  // namespace detail

/// Profiles an RFC-4180 CSV stream whose first record is the header.
inline DatasetProfile profile_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> record;
    if (!reader.next(record)) throw ProfileError(ProfileErrorKind::EmptyInput, 1, "input has no header row");

    std::vector<detail::ColumnAccumulator> cols(record.size());
    for (std::size_t i = 0; i < record.size(); ++i) cols[i].name = record[i];
    std::vector<std::string> names = record;

    DatasetProfile profile;
    while (reader.next(record)) {
        if (record.size() != cols.size())
            throw ProfileError(ProfileErrorKind::RaggedRow, reader.record_line(),
                               "line " + std::to_string(reader.record_line()) + ": expected " +
                                   std::to_string(cols.size()) + " fields, got " + std::to_string(record.size()),
                               cols.size(), record.size());
        for (std::size_t i = 0; i < record.size(); ++i) cols[i].add(record[i]);
        ++profile.row_count;
    }
    for (const auto& c : cols) profile.columns.push_back(c.finish(profile.row_count));
    profile.fingerprint = compute_fingerprint(std::move(names));
    profile.profiled_at = now();
    return profile;
}

inline DatasetProfile profile_csv(std::string_view bytes) {
    std::istringstream in{std::string(bytes)};
    return profile_csv(in);
}

/// Header row only.
inline std::vector<std::string> read_csv_header(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw ProfileError(ProfileErrorKind::EmptyInput, 1, "input has no header row");
    return header;
}

inline json to_json(const ColumnProfile& c) {
    json j = {{"name", c.name},
              {"inferred_type", column_type_name(c.inferred_type)},
              {"missing_count", c.missing_count},
              {"missing_fraction", c.missing_fraction},
              {"distinct_count", c.distinct_count}};
    if (c.min) j["min"] = *c.min;
    if (c.max) j["max"] = *c.max;
    return j;
}

inline json to_json(const DatasetProfile& p) {
    json cols = json::array();
    for (const auto& c : p.columns) cols.push_back(to_json(c));
    return {{"row_count", p.row_count},
            {"columns", std::move(cols)},
            {"fingerprint", {{"column_names", p.fingerprint.column_names}, {"digest", p.fingerprint.digest}}},
            {"profiled_at", format_timestamp(p.profiled_at)}};
}

inline std::string serialize_profile(const DatasetProfile& p) { return canonical_dump(to_json(p)); }

/// The overview module form of a profile, for embedding in a label.
inline ComputedStatsModule to_stats_module(const DatasetProfile& p) {
    ComputedStatsModule m;
    m.row_count = p.row_count;
    for (const auto& c : p.columns)
        m.columns.push_back({c.name, c.inferred_type, c.missing_count, c.distinct_count, c.min, c.max});
    return m;
}

// ---------------------------------------------------------------- staleness

enum class Freshness { fresh, stale };

struct StalenessReport {
    Freshness verdict = Freshness::fresh;
    std::vector<std::string> added_columns;    // in dataset order
    std::vector<std::string> removed_columns;  // in label order
    bool reordered = false;
    Date label_date{};
    std::string note;
    bool operator==(const StalenessReport&) const = default;
};

inline StalenessReport check_staleness(const Label& label, const DatasetProfile& profile) {
    if (!label.fingerprint)
        throw Error("LABEL_HAS_NO_FINGERPRINT", "label '" + label.label_id + "' carries no structural fingerprint");
    const auto& then = label.fingerprint->column_names;
    const auto& live = profile.fingerprint.column_names;
    std::unordered_set<std::string> then_set(then.begin(), then.end()), live_set(live.begin(), live.end());

    StalenessReport r;
    r.label_date = label.date_produced;
    for (const auto& c : live)
        if (!then_set.contains(c) &&
            std::find(r.added_columns.begin(), r.added_columns.end(), c) == r.added_columns.end())
            r.added_columns.push_back(c);
    for (const auto& c : then)
        if (!live_set.contains(c) &&
            std::find(r.removed_columns.begin(), r.removed_columns.end(), c) == r.removed_columns.end())
            r.removed_columns.push_back(c);
    r.reordered = r.added_columns.empty() && r.removed_columns.empty() && then != live;
    r.verdict = label.fingerprint->digest == profile.fingerprint.digest ? Freshness::fresh : Freshness::stale;

    std::string date = format_date(r.label_date);
    if (r.verdict == Freshness::fresh) {
        r.note = "Label produced " + date + "; dataset structure is unchanged since then.";
    } else {
        r.note = "Label produced " + date + "; dataset structure has changed since then:";
        if (!r.added_columns.empty()) r.note += " " + std::to_string(r.added_columns.size()) + " column(s) added;";
        if (!r.removed_columns.empty())
            r.note += " " + std::to_string(r.removed_columns.size()) + " column(s) removed;";
        if (r.reordered) r.note += " columns reordered;";
        r.note.back() = '.';
    }
    return r;
}

inline json to_json(const StalenessReport& r) {
    return {{"verdict", r.verdict == Freshness::fresh ? "fresh" : "stale"},
            {"added_columns", r.added_columns},
            {"removed_columns", r.removed_columns},
            {"reordered", r.reordered},
            {"label_date", format_date(r.label_date)},
            {"note", r.note}};
}

}  // namespace dnl
