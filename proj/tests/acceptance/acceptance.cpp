// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// nonzero if any criterion fails. Sizes and tolerances are fixed here.

#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "dnl/dnl.hpp"
#include "dnl/http.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

using namespace dnl;
using namespace dnl::testing;

namespace {

constexpr int kResolveLabels = 500;
constexpr int kRoundTripLabels = 500;
constexpr int kProfileTables = 200;
constexpr double kFractionTolerance = 1e-12;
constexpr int kBurstClients = 32;
constexpr int kBurstRequestsPerClient = 4;

// SHA-256("1:a\n1:b\n"), computed with Python hashlib and coreutils sha256sum.
constexpr const char* kAbDigest = "700dfd192c1fa8813a20119f60fac69bdaf8fbd38520b4fa5b0a21d00621d59b";

// Pinned clocks. The comparison golden was rendered at 2020-11-02T12:00:00Z.
constexpr const char* kProfileEpoch = "1604275200";
constexpr const char* kCompareEpoch = "1604318400";

struct Outcome {
    bool ok = true;
    std::string detail;
    int failures = 0;

    void fail(const std::string& why) {
        if (failures++ < 5) detail += (detail.empty() ? "" : "; ") + why;
        ok = false;
    }
};

std::vector<std::string> ids_of(const std::vector<Alert>& xs) {
    std::vector<std::string> out;
    for (const auto& x : xs) out.push_back(x.id);
    return out;
}

std::vector<std::string> ids_of(const std::vector<Fyi>& xs) {
    std::vector<std::string> out;
    for (const auto& x : xs) out.push_back(x.id);
    return out;
}

std::vector<Label> compare_fixtures() {
    return {fixture_label("covid.label.json"), fixture_label("covid_county.label.json"),
            fixture_label("housing.label.json")};
}

// ---------------------------------------------------------------- criteria

Outcome schema_conformance() {
    Outcome o;
    auto r = run_schema_corpus();
    if (r.valid < 10) o.fail("only " + std::to_string(r.valid) + " valid documents");
    if (r.invalid < 10) o.fail("only " + std::to_string(r.invalid) + " invalid documents");
    for (const auto& p : r.problems) o.fail(p);
    if (o.ok) o.detail = std::to_string(r.valid) + " valid, " + std::to_string(r.invalid) + " invalid classified";
    return o;
}

Outcome resolution_oracle() {
    Outcome o;
    Gen g(20240501);
    LabelShape shape{10, 4, 40};
    std::size_t pairs = 0;
    for (int i = 0; i < kResolveLabels; ++i) {
        auto l = random_valid_label(g, shape);
        for (const auto& u : l.use_cases)
            for (const auto& p : u.predictions) {
                ++pairs;
                auto v = resolve(l, u.id, p.id);
                auto want = oracle::brute_force_resolve(l, u.id, p.id);
                SeveritySummary s{std::uint64_t(want.colors["red"]), std::uint64_t(want.colors["orange"]),
                                  std::uint64_t(want.colors["yellow"])};
                if (ids_of(v.alerts) != want.alert_ids || ids_of(v.fyis) != want.fyi_ids || v.severity_summary != s)
                    o.fail("label " + std::to_string(i) + " pair " + u.id + "/" + p.id);
            }
    }
    if (o.ok) o.detail = std::to_string(kResolveLabels) + " labels, " + std::to_string(pairs) + " pairs, 0 mismatches";
    return o;
}

Outcome round_trip() {
    Outcome o;
    Gen g(20240502);
    for (int i = 0; i < kRoundTripLabels; ++i) {
        auto l = random_valid_label(g);
        try {
            auto bytes = serialize_label(l);
            if (serialize_label(l) != bytes) o.fail("label " + std::to_string(i) + ": serialize not deterministic");
            auto back = parse_label(bytes);
            if (!(back == l)) o.fail("label " + std::to_string(i) + ": parse(serialize(L)) != L");
            if (serialize_label(back) != bytes) o.fail("label " + std::to_string(i) + ": re-serialization differs");
        } catch (const Error& e) {
            o.fail("label " + std::to_string(i) + ": " + e.what());
        }
    }
    if (o.ok) o.detail = std::to_string(kRoundTripLabels) + " labels, 0 failures";
    return o;
}

Outcome profiler_oracle() {
    Outcome o;
    Gen g(20240503);
    for (int i = 0; i < kProfileTables; ++i) {
        auto t = random_csv(g, 50, 8);
        auto tag = "table " + std::to_string(i);
        DatasetProfile p;
        try {
            std::istringstream in(t.encoded);
            p = profile_csv(in);
        } catch (const Error& e) {
            o.fail(tag + ": " + e.what());
            continue;
        }
        auto want = oracle::in_memory_profile(t.rows);
        if (p.row_count != t.rows.size() - 1) o.fail(tag + ": row_count");
        if (p.columns.size() != want.size()) {
            o.fail(tag + ": column count");
            continue;
        }
        for (std::size_t c = 0; c < want.size(); ++c) {
            const auto& got = p.columns[c];
            const auto& w = want[c];
            auto where = tag + " column " + std::to_string(c);
            if (got.name != w.name) o.fail(where + ": name");
            if (column_type_name(got.inferred_type) != w.type)
                o.fail(where + ": type " + std::string(column_type_name(got.inferred_type)) + " != " + w.type);
            if (got.missing_count != w.missing) o.fail(where + ": missing_count");
            if (got.distinct_count != w.distinct) o.fail(where + ": distinct_count");
            double frac = p.row_count ? double(w.missing) / double(p.row_count) : 0.0;
            if (std::fabs(got.missing_fraction - frac) > kFractionTolerance) o.fail(where + ": missing_fraction");
            if (got.min.has_value() != w.has_extremes || (w.has_extremes && (*got.min != w.min || *got.max != w.max)))
                o.fail(where + ": min/max");
        }
    }
    if (o.ok) o.detail = std::to_string(kProfileTables) + " tables, 0 mismatches";
    return o;
}

Outcome fingerprint_and_staleness() {
    Outcome o;
    auto fp = compute_fingerprint({"a", "b"});
    if (fp.digest != kAbDigest) o.fail("digest " + fp.digest);
    // cross-check against coreutils when it is installed
    auto tool = run_program("sh", {"-c", "printf '1:a\\n1:b\\n' | sha256sum"});
    bool tool_checked = tool.code == 0 && tool.out.size() >= 64;
    if (tool_checked && tool.out.substr(0, 64) != fp.digest) o.fail("sha256sum disagrees: " + tool.out.substr(0, 64));

    auto label = fixture_label("covid.label.json");
    auto fresh = check_staleness(label, profile_csv(read_fixture("covid.csv")));
    if (fresh.verdict != Freshness::fresh) o.fail("identical columns not fresh");
    auto added = check_staleness(label, profile_csv(read_fixture("covid_plus_deaths.csv")));
    if (added.verdict != Freshness::stale || added.added_columns != std::vector<std::string>{"deaths"} ||
        !added.removed_columns.empty() || added.reordered)
        o.fail("added column: " + to_json(added).dump());
    auto moved = check_staleness(label, profile_csv(read_fixture("covid_reordered.csv")));
    if (moved.verdict != Freshness::stale || !moved.reordered || !moved.added_columns.empty() ||
        !moved.removed_columns.empty())
        o.fail("reordered: " + to_json(moved).dump());
    if (o.ok)
        o.detail = std::string("digest matches") + (tool_checked ? " (and sha256sum)" : "") +
                   "; fresh / stale(added=[deaths]) / stale(reordered)";
    return o;
}

Outcome end_to_end() {
    Outcome o;
    const auto covid = fixture_path("covid.label.json").string();
    auto label = fixture_label("covid.label.json");

    std::size_t preds = 0, flagged = 0;
    std::set<Severity> sevs;
    for (const auto& u : label.use_cases) preds += u.predictions.size();
    for (const auto& a : label.alerts) sevs.insert(a.severity);
    for (const auto& q : label.questionnaire) flagged += q.flag.has_value();
    if (label.use_cases.size() < 2 || preds < 4 || label.alerts.size() < 6 || sevs.size() < 3 ||
        label.fyis.size() < 2 || label.questionnaire.size() < 10 || flagged < 2)
        o.fail("sample label is smaller than required");

    auto v = run_cli({"validate", covid});
    if (v.code != 0 || v.out != "OK\n") o.fail("validate exit " + std::to_string(v.code));

    for (const auto& view : resolve_all(label)) {
        auto r = run_cli({"resolve", covid, "--use-case", view.use_case_id, "--prediction", view.prediction_id, "--json"});
        if (r.code != 0 || r.out != serialize_resolved_view(view))
            o.fail("resolve " + view.use_case_id + "/" + view.prediction_id);
    }

    auto out = scratch_dir("acceptance-render");
    auto rendered = run_cli({"render", covid, "--out", out.string()});
    if (rendered.code != 0) o.fail("render exit " + std::to_string(rendered.code));
    const auto golden = testdata_path("golden");
    for (const auto& e : std::filesystem::recursive_directory_iterator(golden / "covid")) {
        if (!e.is_regular_file()) continue;
        auto rel = std::filesystem::relative(e.path(), golden / "covid");
        if (!std::filesystem::exists(out / rel) || read_file(out / rel) != read_file(e.path()))
            o.fail("render " + rel.string() + " differs from golden");
    }

    auto cmp_dir = out / "compare";
    auto cmp = run_cli({"compare", "--use-case", "Forecast case counts", "--out", cmp_dir.string(), covid,
                        fixture_path("covid_county.label.json").string(), fixture_path("housing.label.json").string()},
                       std::string("SOURCE_DATE_EPOCH=") + kCompareEpoch);
    if (cmp.code != 0) o.fail("compare exit " + std::to_string(cmp.code));
    else if (!std::filesystem::exists(cmp_dir / "comparison.html") ||
             read_file(cmp_dir / "comparison.html") != read_file(golden / "comparison.html"))
        o.fail("comparison.html differs from golden");
    std::filesystem::remove_all(out);
    if (o.ok) o.detail = "validate, resolve x" + std::to_string(preds) + ", render, compare: exit 0, golden HTML stable";
    return o;
}

Outcome service_parity() {
    Outcome o;
    setenv("SOURCE_DATE_EPOCH", kProfileEpoch, 1);
    auto dir = scratch_dir("acceptance-store");
    auto labels = compare_fixtures();
    for (auto name : {"covid.label.json", "covid_county.label.json", "housing.label.json"})
        std::filesystem::copy_file(fixture_path(name), dir / name);
    std::ostringstream log;
    LabelStore store(dir, log);
    HttpServer server(store);
    int port = server.start("127.0.0.1", 0);
    auto client = [port] {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(20, 0);
        return c;
    };
    auto expect_get = [&](const std::string& path, const std::string& body) {
        auto r = client().Get(path);
        if (!r) o.fail("GET " + path + ": " + httplib::to_string(r.error()));
        else if (r->status != 200 || r->body != body) o.fail("GET " + path + " differs from library");
    };

    std::size_t gets = 0;
    LabelStore::Index index;
    for (const auto& l : labels) index.emplace(l.label_id, std::make_shared<const LabelStore::Entry>(LabelStore::Entry{l, ""}));
    expect_get("/labels", canonical_dump(store_listing_json(index)));
    ++gets;
    for (const auto& l : labels) {
        expect_get("/labels/" + l.label_id, serialize_label(l));
        expect_get("/labels/" + l.label_id + "/use-cases", canonical_dump(use_cases_to_json(l)));
        gets += 2;
        for (const auto& v : resolve_all(l)) {
            expect_get("/labels/" + l.label_id + "/resolve?use_case=" + v.use_case_id + "&prediction=" + v.prediction_id,
                       serialize_resolved_view(v));
            ++gets;
        }
    }
    expect_get("/compare?use_case=Forecast%20case%20counts&ids=covid-states-2020,covid-counties-2020,nyc-housing-2020",
               serialize_comparison(compare_labels(labels, "Forecast case counts")));
    ++gets;

    auto cli = run_cli({"profile", fixture_path("covid.csv").string()}, std::string("SOURCE_DATE_EPOCH=") + kProfileEpoch);
    auto posted = client().Post("/profile", read_fixture("covid.csv"), "text/csv");
    if (cli.code != 0 || !posted || posted->status != 200 || posted->body != cli.out)
        o.fail("POST /profile differs from CLI profile");

    // burst: half the clients submit new labels, half read existing ones
    auto base = json::parse(read_fixture("covid.label.json"));
    const auto reference = serialize_label(labels[0]);
    std::atomic<int> errors{0};
    std::vector<std::string> submitted;
    std::mutex submitted_mu;
    std::vector<std::thread> workers;
    for (int w = 0; w < kBurstClients; ++w) {
        workers.emplace_back([&, w] {
            auto c = client();
            for (int k = 0; k < kBurstRequestsPerClient; ++k) {
                if (w % 2 == 0) {
                    auto doc = base;
                    auto id = "burst-" + std::to_string(w) + "-" + std::to_string(k);
                    doc["label_id"] = id;
                    auto r = c.Post("/labels", doc.dump(), "application/json");
                    if (!r || r->status != 201) ++errors;
                    std::lock_guard lock(submitted_mu);
                    submitted.push_back(id);
                } else {
                    auto r = c.Get("/labels/covid-states-2020");
                    if (!r || r->status != 200 || r->body != reference) ++errors;
                    auto list = c.Get("/labels");
                    if (!list || list->status != 200) ++errors;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (errors) o.fail(std::to_string(errors.load()) + " burst requests failed");

    const std::size_t expected = labels.size() + submitted.size();
    auto listing = client().Get("/labels");
    if (!listing || json::parse(listing->body).size() != expected) o.fail("listing size after burst");
    for (const auto& id : submitted) {
        auto doc = base;
        doc["label_id"] = id;
        auto r = client().Get("/labels/" + id);
        if (!r || r->status != 200 || r->body != serialize_label(label_from_json(doc))) o.fail("GET " + id + " after burst");
    }
    std::ostringstream reopen_log;
    LabelStore reopened(dir, reopen_log);
    if (reopened.snapshot()->size() != expected || !reopened.skipped().empty()) o.fail("store on disk inconsistent");

    server.stop();
    std::filesystem::remove_all(dir);
    unsetenv("SOURCE_DATE_EPOCH");
    if (o.ok)
        o.detail = std::to_string(gets) + " GETs byte-identical; POST /profile == CLI; " +
                   std::to_string(kBurstClients) + "-way burst left " + std::to_string(expected) + " labels";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"schema conformance", schema_conformance},
        {"resolution oracle equivalence", resolution_oracle},
        {"round-trip and canonicality", round_trip},
        {"profiler oracle equivalence", profiler_oracle},
        {"fingerprint bit-exactness and staleness", fingerprint_and_staleness},
        {"end-to-end fixture", end_to_end},
        {"service/library parity", service_parity},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            o = check();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        std::cout << (o.ok ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail << ", " << ms.count() << " ms)\n";
        failed += !o.ok;
    }
    std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : std::string("all criteria passed")) << "\n";
    return failed ? 1 : 0;
}
