#pragma once

// Runs the schema corpus under tests/data/schema_corpus: every file in valid/
// must parse and validate cleanly; every file in invalid/ must fail with the
// code listed for it in manifest.json, and with no other error code.

#include <set>
#include <string>
#include <vector>

#include "dnl/label_io.hpp"
#include "dnl/store.hpp"
#include "support/fixtures.hpp"

namespace dnl::testing {

struct CorpusResult {
    std::size_t valid = 0, invalid = 0;
    std::vector<std::string> problems;
};

inline CorpusResult run_schema_corpus() {
    namespace fs = std::filesystem;
    const auto root = testdata_path("schema_corpus");
    CorpusResult out;

    std::vector<fs::path> valid;
    for (const auto& e : fs::directory_iterator(root / "valid")) valid.push_back(e.path());
    std::sort(valid.begin(), valid.end());
    for (const auto& p : valid) {
        ++out.valid;
        try {
            auto report = validate_label(parse_label(read_file(p)));
            if (!report.passed()) out.problems.push_back(p.filename().string() + ": " + to_json(report).dump());
        } catch (const Error& e) {
            out.problems.push_back(p.filename().string() + ": " + e.what());
        }
    }

    auto manifest = json::parse(read_file(root / "manifest.json"));
    std::set<std::string> listed;
    for (auto it = manifest.begin(); it != manifest.end(); ++it) {
        ++out.invalid;
        listed.insert(it.key());
        const std::string want = it.value().at("code");
        const std::string stage = it.value().at("stage");
        std::string got_stage, got;
        std::set<std::string> codes;
        try {
            auto report = validate_label(parse_label(read_file(root / "invalid" / it.key())));
            got_stage = "validate";
            for (const auto& v : report.violations)
                if (v.level == Level::error) codes.insert(v.code);
            if (codes.size() == 1) got = *codes.begin();
            else got = std::to_string(codes.size()) + " error codes";
        } catch (const ParseError& e) {
            got_stage = "parse";
            got = e.code();
        }
        if (got_stage != stage || got != want)
            out.problems.push_back(it.key() + ": expected " + stage + " " + want + ", got " + got_stage + " " + got);
    }
    for (const auto& e : fs::directory_iterator(root / "invalid"))
        if (!listed.count(e.path().filename().string()))
            out.problems.push_back(e.path().filename().string() + ": not listed in manifest.json");
    return out;
}

}  // namespace dnl::testing
