#include <gtest/gtest.h>

#include <cstdlib>
#include <regex>

#include "dnl/dnl.hpp"
#include "support/fixtures.hpp"

using namespace dnl;
using dnl::testing::fixture_label;
using dnl::testing::testdata_path;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + needle.size())) ++n;
    return n;
}

/// Text between the opening tag of the pair section and its closing tag.
std::string pair_section(const std::string& page, const std::string& u, const std::string& p) {
    auto start = page.find("id=\"" + html::anchor("pair", {u, p}) + "\"");
    if (start == std::string::npos) return {};
    auto end = page.find("<section class=\"prediction\"", start);
    auto uc_end = page.find("<section class=\"use-case\"", start);
    end = std::min(end, uc_end);
    return page.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

const Timestamp kGenerated = *parse_timestamp("2020-11-02T12:00:00Z");

void check_golden(const std::string& rel, const std::string& actual) {
    auto path = testdata_path("golden/" + rel);
    if (std::getenv("DNL_UPDATE_GOLDEN")) {
        std::filesystem::create_directories(path.parent_path());
        write_file_atomic(path, actual);
        return;
    }
    ASSERT_TRUE(std::filesystem::exists(path)) << path << " missing; rerun with DNL_UPDATE_GOLDEN=1";
    EXPECT_EQ(read_file(path), actual) << rel << " drifted from its golden copy";
}

std::vector<Label> compare_fixtures() {
    return {fixture_label("covid.label.json"), fixture_label("covid_county.label.json"),
            fixture_label("housing.label.json")};
}

}  // namespace

TEST(Render, DocumentSetShape) {
    auto docs = render_label_html(fixture_label("covid.label.json"));
    std::vector<std::string> names;
    for (const auto& [k, v] : docs) names.push_back(k);
    EXPECT_EQ(names, (std::vector<std::string>{"assets/label.css", "dataset-info.html", "index.html",
                                               "overview.html", "use-cases.html"}));
}

TEST(Render, ExactlyThreeNavEntries) {
    auto docs = render_label_html(fixture_label("covid.label.json"));
    for (const auto& [name, body] : docs) {
        if (!name.ends_with(".html")) continue;
        EXPECT_EQ(count(body, "class=\"pane-link"), 3u) << name;
        EXPECT_NE(body.find(">Overview</a>"), std::string::npos) << name;
        EXPECT_NE(body.find(">Use Cases &amp; Alerts</a>"), std::string::npos) << name;
        EXPECT_NE(body.find(">Dataset Info</a>"), std::string::npos) << name;
    }
}

TEST(Render, Deterministic) {
    auto l = fixture_label("covid.label.json");
    EXPECT_EQ(render_label_html(l), render_label_html(l));
}

TEST(Render, SeverityClassesMatchResolve) {
    auto l = fixture_label("covid.label.json");
    auto page = render_label_html(l).at("use-cases.html");
    for (const auto& v : resolve_all(l)) {
        auto section = pair_section(page, v.use_case_id, v.prediction_id);
        ASSERT_FALSE(section.empty()) << v.use_case_id << "/" << v.prediction_id;
        EXPECT_EQ(count(section, "sev-red"), v.severity_summary.red);
        EXPECT_EQ(count(section, "sev-orange"), v.severity_summary.orange);
        EXPECT_EQ(count(section, "sev-yellow"), v.severity_summary.yellow);
        EXPECT_EQ(count(section, "sev-green"), v.fyis.size());
    }
}

TEST(Render, OneRedAlertOneRedClass) {
    Label l = fixture_label("covid.label.json");
    l.questionnaire.clear();
    l.alerts.erase(std::remove_if(l.alerts.begin(), l.alerts.end(),
                                  [](const Alert& a) { return a.severity == Severity::no_known_mitigation; }),
                   l.alerts.end());
    for (auto& a : l.alerts) a.derived_from_question.reset();
    for (auto& f : l.fyis) f.derived_from_question.reset();
    l.overview_modules.clear();
    Alert red;
    red.id = "only-red";
    red.title = "Only red";
    red.description = "";
    red.severity = Severity::no_known_mitigation;
    red.scope = {PairScope{"u-testing", "p-rank"}};
    l.alerts.push_back(red);
    ASSERT_TRUE(validate_label(l).passed()) << to_json(validate_label(l)).dump();
    auto page = render_label_html(l).at("use-cases.html");
    EXPECT_EQ(count(pair_section(page, "u-testing", "p-rank"), "sev-red"), 1u);
    EXPECT_EQ(count(page, "sev-red"), 1u);
}

TEST(Render, DatasetInfoCategoriesInOrder) {
    auto page = render_label_html(fixture_label("covid.label.json")).at("dataset-info.html");
    std::size_t last = 0;
    for (auto id : {"cat-description", "cat-composition", "cat-provenance", "cat-collection", "cat-management"}) {
        auto pos = page.find(std::string("id=\"") + id + "\"");
        ASSERT_NE(pos, std::string::npos) << id;
        EXPECT_GT(pos, last) << id;
        last = pos;
    }
    EXPECT_NE(page.find("Not provided"), std::string::npos);
}

TEST(Render, FlaggedAnswerLinksToItsAlert) {
    auto l = fixture_label("covid.label.json");
    auto docs = render_label_html(l);
    const auto& info = docs.at("dataset-info.html");
    std::regex link("href=\"use-cases.html#([^\"]+)\"");
    std::size_t links = 0;
    for (std::sregex_iterator it(info.begin(), info.end(), link), end; it != end; ++it) {
        ++links;
        EXPECT_NE(docs.at("use-cases.html").find("id=\"" + (*it)[1].str() + "\""), std::string::npos)
            << (*it)[1].str();
    }
    EXPECT_GE(links, 2u);
}

TEST(Render, EscapesMarkup) {
    auto l = fixture_label("covid.label.json");
    l.dataset_name = "<script>alert(1)</script> & co";
    auto docs = render_label_html(l);
    EXPECT_EQ(docs.at("index.html").find("<script>"), std::string::npos);
    EXPECT_NE(docs.at("index.html").find("&lt;script&gt;"), std::string::npos);
}

TEST(Render, RefusesInvalidLabel) {
    auto l = fixture_label("covid.label.json");
    l.use_cases[0].predictions.clear();
    EXPECT_THROW(render_label_html(l), RenderError);
}

TEST(Compare, MatchedAndNotApplicable) {
    auto labels = compare_fixtures();
    auto r = compare_labels(labels, "  forecast CASE counts ", kGenerated);
    EXPECT_EQ(r.use_case_title, "forecast case counts");
    ASSERT_EQ(r.entries.size(), 3u);
    EXPECT_EQ(r.entries[0].matched_use_case, "u-forecast");
    EXPECT_EQ(r.entries[0].severity_counts, (SeveritySummary{2, 2, 3}));
    EXPECT_EQ(r.entries[0].fyi_count, 2u);
    EXPECT_EQ(r.entries[1].matched_use_case, "forecast");
    EXPECT_EQ(r.entries[1].severity_counts, (SeveritySummary{1, 1, 1}));
    EXPECT_FALSE(r.entries[2].matched());
    EXPECT_EQ(to_json(r)["entries"][2]["status"], "not_applicable");
}

TEST(Compare, CountsAreUnionOverPredictions) {
    // brute force: union of resolve() ids over the matched use case
    auto labels = compare_fixtures();
    auto r = compare_labels(labels, "Forecast case counts", kGenerated);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!r.entries[i].matched()) continue;
        const auto* u = labels[i].find_use_case(*r.entries[i].matched_use_case);
        std::map<std::string, Severity> seen;
        std::set<std::string> fyis;
        for (const auto& p : u->predictions) {
            auto v = resolve(labels[i], u->id, p.id);
            for (const auto& a : v.alerts) seen.emplace(a.id, a.severity);
            for (const auto& f : v.fyis) fyis.insert(f.id);
        }
        SeveritySummary want;
        for (const auto& [id, s] : seen) want.add(s);
        EXPECT_EQ(r.entries[i].severity_counts, want);
        EXPECT_EQ(r.entries[i].fyi_count, fyis.size());
    }
}

TEST(Compare, Errors) {
    auto labels = compare_fixtures();
    auto code_of = [&](std::span<const Label> ls, std::string title) {
        try {
            compare_labels(ls, title, kGenerated);
        } catch (const CompareError& e) {
            return e.code();
        }
        return std::string("none");
    };
    EXPECT_EQ(code_of(std::span(labels).first(1), "Forecast case counts"), "FEWER_THAN_TWO_LABELS");
    EXPECT_EQ(code_of(labels, "   "), "EMPTY_USE_CASE_TITLE");
    EXPECT_EQ(code_of(labels, "Nothing like this"), "NO_LABEL_MATCHES");
}

TEST(Compare, HtmlTableCounts) {
    auto labels = compare_fixtures();
    auto r = compare_labels(labels, "Forecast case counts", kGenerated);
    auto page = render_comparison_html(r);
    EXPECT_EQ(count(page, "<table"), 1u);
    EXPECT_EQ(count(page, "data-label-id="), 3u);
    std::regex red_row("<tr class=\"row-red\">(.*?)</tr>");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(page, m, red_row));
    std::string cells = m[1];
    std::regex count_cell("data-count=\"([0-9]+)\"");
    std::vector<std::uint64_t> got;
    for (std::sregex_iterator it(cells.begin(), cells.end(), count_cell), end; it != end; ++it)
        got.push_back(std::stoull((*it)[1]));
    EXPECT_EQ(got, (std::vector<std::uint64_t>{2, 1}));
    EXPECT_EQ(count(cells, "not applicable"), 1u);
}

TEST(Golden, CovidLabelPages) {
    for (const auto& [rel, body] : render_label_html(fixture_label("covid.label.json")))
        check_golden("covid/" + rel, body);
}

TEST(Golden, ComparisonPage) {
    auto labels = compare_fixtures();
    check_golden("comparison.html", render_comparison_html(compare_labels(labels, "Forecast case counts", kGenerated)));
}
