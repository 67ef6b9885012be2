#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dea/errors.hpp"
#include "dea/ingest.hpp"

namespace {

const char* kHeader =
    "ansp_code,ansp_name,year,atco_hours,non_atco_share,acc_count,tower_count,flight_hours,"
    "airport_movements,er_unit_cost,tnl_unit_cost\n";

std::filesystem::path write_csv(const std::string& name, const std::string& body,
                                const char* header = kHeader) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << header << body;
    return path;
}

std::string row(const std::string& code, int year, const std::string& rest =
                                                       "100000,0.5,2,10,200000,150000,300,90") {
    return code + ",Name " + code + "," + std::to_string(year) + "," + rest + "\n";
}

}  // namespace

TEST_CASE("year filter keeps 2008 onwards by default") {
    std::string body;
    for (int y = 2003; y <= 2018; ++y) body += row("AAA", y);
    auto path = write_csv("ingest_years.csv", body);
    auto result = dea::load_panel(path);
    CHECK(result.panel.years().front() == 2008);
    CHECK(result.panel.years().back() == 2018);
    CHECK(result.panel.years().size() == 11);
    CHECK(result.report.kept_rows == 11);
    CHECK(result.report.dropped.size() == 5);  // 2003..2007 filtered, reported
    for (const auto& d : result.report.dropped) CHECK(d.reason.find("before min_year") != std::string::npos);
}

TEST_CASE("single valid row passes through") {
    auto path = write_csv("ingest_single.csv", row("AAA", 2010));
    auto result = dea::load_panel(path);
    CHECK(result.panel.records().size() == 1);
    CHECK(result.panel.records()[0].dmu.code == "AAA");
    CHECK(result.report.total_rows == 1);
}

TEST_CASE("duplicate (dmu, year) rows: second occurrence dropped and reported") {
    auto path = write_csv("ingest_dup.csv", row("AAA", 2010) + row("AAA", 2010) + row("BBB", 2010));
    auto result = dea::load_panel(path);
    CHECK(result.panel.records().size() == 2);
    REQUIRE(result.report.dropped.size() == 1);
    CHECK(result.report.dropped[0].reason == "duplicate (dmu, year) row");
    CHECK(result.report.dropped[0].line == 3);
}

TEST_CASE("no silent row loss") {
    auto path = write_csv("ingest_conserve.csv",
                          row("AAA", 2010) + row("BAD", 2011, "-5,0.5,2,10,1,1,,") +
                              row("AAA", 2010) + row("OLD", 2001) + row("CCC", 2012));
    auto result = dea::load_panel(path);
    CHECK(result.report.kept_rows + result.report.dropped.size() == result.report.total_rows);
    CHECK(result.report.total_rows == 5);
}

TEST_CASE("schema and io errors") {
    auto missing = write_csv("ingest_missing_col.csv", "AAA,2010\n", "ansp_code,year\n");
    CHECK_THROWS_AS(dea::load_panel(missing), dea::SchemaMismatch);
    CHECK_THROWS_AS(dea::load_panel("/nonexistent/file.csv"), dea::UnreadableFile);
    auto empty = write_csv("ingest_all_old.csv", row("AAA", 1999));
    CHECK_THROWS_AS(dea::load_panel(empty), dea::EmptyPanel);
}

TEST_CASE("strict mode fails on the first violation") {
    auto path = write_csv("ingest_strict.csv", row("AAA", 2010) + row("BAD", 2011, "-5,0.5,2,10,1,1,,"));
    dea::IngestOptions opts;
    opts.strict = true;
    CHECK_THROWS_AS(dea::load_panel(path, opts), dea::SchemaMismatch);
    CHECK_NOTHROW(dea::load_panel(path));  // default drops and reports instead
}

TEST_CASE("drop_invalid=false escalates validation failures") {
    auto path = write_csv("ingest_nodrop.csv", row("AAA", 2010) + row("BAD", 2011, "-5,0.5,2,10,1,1,,"));
    dea::IngestOptions opts;
    opts.drop_invalid = false;
    CHECK_THROWS_AS(dea::load_panel(path, opts), dea::SchemaMismatch);

    // year filtering stays routine
    auto fine = write_csv("ingest_nodrop_ok.csv", row("AAA", 2010) + row("AAA", 2001));
    CHECK_NOTHROW(dea::load_panel(fine, opts));
}

TEST_CASE("quoted names and reordered columns are accepted") {
    auto path = write_csv("ingest_quoted.csv",
                          "2012,\"Control, Inc.\",AAA,100000,0.5,2,10,200000,150000,,\n",
                          "year,ansp_name,ansp_code,atco_hours,non_atco_share,acc_count,tower_count,"
                          "flight_hours,airport_movements,er_unit_cost,tnl_unit_cost\n");
    auto result = dea::load_panel(path);
    REQUIRE(result.panel.records().size() == 1);
    CHECK(result.panel.records()[0].dmu.display_name == "Control, Inc.");
    CHECK_FALSE(result.panel.records()[0].er_unit_cost.has_value());
}

TEST_CASE("ingest report serializes to JSON") {
    auto path = write_csv("ingest_json.csv", row("AAA", 2010) + row("BBB", 2010) + row("AAA", 2011));
    auto result = dea::load_panel(path);
    auto json = result.report.to_json();
    CHECK(json.find("\"kept_rows\": 3") != std::string::npos);
    CHECK(json.find("\"2010\": 2") != std::string::npos);
}

TEST_CASE("descriptive stats use interpolated quartiles") {
    std::string body = row("AAA", 2016, "1,0.5,1,1,9442,1,,") + row("BBB", 2016, "2,0.5,1,1,237314,2,,") +
                       row("CCC", 2016, "3,0.5,1,1,2287512,3,,");
    auto path = write_csv("ingest_stats.csv", body);
    auto panel = dea::load_panel(path).panel;
    auto stats = dea::descriptive_stats(panel, 2016);

    const dea::IndicatorStats* atco = nullptr;
    const dea::IndicatorStats* fh = nullptr;
    for (const auto& s : stats) {
        if (s.indicator == "atco_hours") atco = &s;
        if (s.indicator == "flight_hours") fh = &s;
    }
    REQUIRE(atco != nullptr);
    CHECK(atco->min == 1.0);
    CHECK(atco->median == 2.0);
    CHECK(atco->q3 == doctest::Approx(2.5));
    CHECK(atco->max == 3.0);
    REQUIRE(fh != nullptr);
    CHECK(fh->min == 9442.0);
    CHECK(fh->median == 237314.0);
    CHECK(fh->max == 2287512.0);

    CHECK_THROWS_AS(dea::descriptive_stats(panel, 1990), dea::YearAbsent);
}

TEST_CASE("single-DMU year is degenerate with zero stddev") {
    auto path = write_csv("ingest_degenerate.csv", row("AAA", 2012));
    auto panel = dea::load_panel(path).panel;
    for (const auto& s : dea::descriptive_stats(panel, 2012)) {
        CHECK(s.degenerate);
        CHECK(s.stddev == 0.0);
        CHECK(s.min == s.median);
        CHECK(s.median == s.q3);
        CHECK(s.q3 == s.max);
    }
}

TEST_CASE("descriptive stats are permutation invariant") {
    std::vector<std::string> rows = {row("AAA", 2016, "5,0.4,1,2,100,10,,"),
                                     row("BBB", 2016, "1,0.6,2,4,300,20,,"),
                                     row("CCC", 2016, "3,0.5,3,6,200,30,,")};
    auto p1 = write_csv("ingest_perm1.csv", rows[0] + rows[1] + rows[2]);
    auto p2 = write_csv("ingest_perm2.csv", rows[2] + rows[0] + rows[1]);
    auto s1 = dea::descriptive_stats(dea::load_panel(p1).panel, 2016);
    auto s2 = dea::descriptive_stats(dea::load_panel(p2).panel, 2016);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i].indicator == s2[i].indicator);
        CHECK(s1[i].min == s2[i].min);
        CHECK(s1[i].median == s2[i].median);
        CHECK(s1[i].q3 == s2[i].q3);
        CHECK(s1[i].max == s2[i].max);
        CHECK(s1[i].stddev == doctest::Approx(s2[i].stddev).epsilon(1e-12));
    }
}
