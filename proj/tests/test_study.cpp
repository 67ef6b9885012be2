#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>

#include "dea/errors.hpp"
#include "dea/stats.hpp"
#include "dea/study.hpp"
#include "support/synthetic.hpp"

using dea::Method;
using dea::Rts;
using dea::StudyPlan;
using dea::TableKey;

namespace {

StudyPlan small_plan(std::vector<dea::ModelSpec> specs, std::vector<int> years,
                     std::vector<Rts> rts = {Rts::Crs}, std::vector<Method> methods = {Method::Radial}) {
    StudyPlan plan;
    plan.specs = std::move(specs);
    plan.years = std::move(years);
    plan.rts_set = std::move(rts);
    plan.methods = std::move(methods);
    plan.bootstrap.replications = 120;
    return plan;
}

dea::DeaResult result_of(const std::string& code, double score,
                         dea::SolveStatus status = dea::SolveStatus::Optimal) {
    dea::DeaResult r;
    r.dmu = {code, code};
    r.score = score;
    r.status = status;
    return r;
}

}  // namespace

TEST_CASE("unit plan yields a single table") {
    auto panel = synthetic::planted_outlier_panel(4, 2016, 2016);
    auto report = dea::run_study(panel, small_plan({dea::builtin_model("2B")}, {2016}));
    CHECK(report.tables.size() == 1);
    CHECK(report.failed.empty());
    CHECK(report.planned_cells() == 1);
    const auto& table = report.tables.begin()->second;
    CHECK(table.key.file_stem() == "2B_2016_crs_radial");
    CHECK(table.results.size() == 5);
}

TEST_CASE("full grid: 6 models x 11 years x 2 rts x 4 methods plans 528 tables") {
    auto panel = synthetic::make_panel({.n_dmus = 10, .year_from = 2008, .year_to = 2018});
    auto plan = small_plan(dea::builtin_models(), panel.years(), {Rts::Crs, Rts::Vrs},
                           {Method::Radial, Method::SuperEfficiency, Method::Sbm, Method::Bootstrap});
    plan.bootstrap.replications = 60;
    auto report = dea::run_study(panel, plan);
    CHECK(report.planned_cells() == 528);
    CHECK(report.tables.size() + report.failed.size() == 528);
    CHECK(report.tables.size() > 500);  // small panels may degenerate in a few cells
}

TEST_CASE("years absent from the panel fail their cells only") {
    auto panel = synthetic::planted_outlier_panel(4, 2015, 2016);
    auto report = dea::run_study(panel, small_plan({dea::builtin_model("2A")}, {2016, 2030}));
    CHECK(report.tables.size() == 1);
    REQUIRE(report.failed.size() == 1);
    CHECK(report.failed[0].key.year == 2030);
    CHECK(report.failed[0].reason.find("not in panel") != std::string::npos);
}

TEST_CASE("rank: dense with unity ties") {
    auto ranks = dea::rank({result_of("A", 1.0), result_of("B", 0.5), result_of("C", 0.5)});
    CHECK(ranks.at("A") == 1);
    CHECK(ranks.at("B") == 2);
    CHECK(ranks.at("C") == 2);

    ranks = dea::rank({result_of("A", 2.0), result_of("B", 1.4), result_of("C", 0.9)});
    CHECK(ranks.at("A") == 1);
    CHECK(ranks.at("B") == 2);
    CHECK(ranks.at("C") == 3);

    // scores within the tolerance share a rank
    ranks = dea::rank({result_of("A", 1.0), result_of("B", 1.0 - 5e-7), result_of("C", 0.8)});
    CHECK(ranks.at("A") == 1);
    CHECK(ranks.at("B") == 1);
    CHECK(ranks.at("C") == 2);

    // infeasible super-efficiency results are unmatched extremes: best rank
    ranks = dea::rank({result_of("A", 1.3), result_of("B", 0.0, dea::SolveStatus::Infeasible)});
    CHECK(ranks.at("B") == 1);
    CHECK(ranks.at("A") == 2);
}

TEST_CASE("ranks are consistent with scores") {
    std::mt19937_64 rng(71);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<dea::DeaResult> table;
        int n = 2 + static_cast<int>(rng() % 10);
        for (int i = 0; i < n; ++i)
            table.push_back(result_of("D" + std::to_string(i), synthetic::uniform(rng, 0.1, 2.0)));
        auto ranks = dea::rank(table);
        for (const auto& a : table) {
            for (const auto& b : table) {
                if (a.score > b.score + 1e-6) CHECK(ranks.at(a.dmu.code) < ranks.at(b.dmu.code));
                if (std::fabs(a.score - b.score) < 1e-9)
                    CHECK(ranks.at(a.dmu.code) == ranks.at(b.dmu.code));
            }
        }
    }
}

TEST_CASE("super-efficiency separates units the radial frontier ties") {
    dea::FactorMatrix fm;
    fm.dmu_order = {{"A", "A"}, {"B", "B"}, {"C", "C"}};
    fm.input_names = {"x"};
    fm.output_names = {"y1", "y2"};
    fm.inputs = {{1.0}, {1.0}, {1.0}};
    fm.outputs = {{5.0, 1.0}, {1.0, 4.0}, {2.0, 2.0}};

    dea::DeaConfig cfg;
    auto radial = dea::run_all(fm, cfg);
    auto radial_ranks = dea::rank(radial.results);
    CHECK(radial_ranks.at("A") == 1);
    CHECK(radial_ranks.at("B") == 1);
    CHECK(radial_ranks.at("C") == 2);

    cfg.method = Method::SuperEfficiency;
    auto super = dea::run_all(fm, cfg);
    CHECK(super.results[0].score == doctest::Approx(2.5));
    CHECK(super.results[1].score == doctest::Approx(2.0));
    auto super_ranks = dea::rank(super.results);
    CHECK(super_ranks.at("A") == 1);
    CHECK(super_ranks.at("B") == 2);
    CHECK(super_ranks.at("C") == 3);
}

TEST_CASE("trend check") {
    std::vector<std::pair<int, double>> line;
    for (int i = 0; i < 6; ++i) line.push_back({2008 + i, 0.5 + 0.05 * i});
    auto t = dea::trend_check(line);
    CHECK(t.is_trend);
    CHECK(t.slope == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(t.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    auto f = dea::trend_check({{2008, 0.5}, {2009, 0.9}, {2010, 0.5}, {2011, 0.9}});
    CHECK_FALSE(f.is_trend);
    CHECK(f.slope == doctest::Approx(0.08));
    CHECK(f.r_squared == doctest::Approx(0.2));

    auto c = dea::trend_check({{2008, 0.7}, {2009, 0.7}, {2010, 0.7}});
    CHECK_FALSE(c.is_trend);
    CHECK(c.zero_spread);
    CHECK(c.slope == 0.0);

    CHECK_THROWS_AS(dea::trend_check({{2008, 0.5}, {2009, 0.6}}), dea::InsufficientYears);
}

TEST_CASE("dispersion: constant series collapse, order statistics hold") {
    auto panel = synthetic::planted_outlier_panel(4, 2012, 2016);
    auto report = dea::run_study(panel, small_plan({dea::builtin_model("2A")}, panel.years()));
    auto rows = dea::dispersion(report, "2A", Rts::Crs, Method::Radial);
    REQUIRE(!rows.empty());
    for (const auto& d : rows) {  // identical records every year => constant scores
        CHECK(d.iqr == doctest::Approx(0.0));
        CHECK(d.stddev == doctest::Approx(0.0));
        CHECK(d.min == d.max);
    }

    auto one_year = dea::run_study(panel, small_plan({dea::builtin_model("2A")}, {2016}));
    CHECK_THROWS_AS(dea::dispersion(one_year, "2A", Rts::Crs, Method::Radial),
                    dea::InsufficientYears);
}

TEST_CASE("volatile outputs make SBM disperse more than radial") {
    // E is a stable anchor; F carries a second input that swings year to year
    // without moving its radial score.
    std::vector<dea::DmuYearRecord> records;
    double f_share[4] = {0.22, 0.40, 0.22, 0.40};
    for (int i = 0; i < 4; ++i) {
        dea::DmuYearRecord e;
        e.dmu = {"EEE", "anchor"};
        e.year = 2008 + i;
        e.atco_hours = 1000;
        e.non_atco_share = 0.1;
        e.acc_count = 1;
        e.tower_count = 1;
        e.flight_hours = 1000;
        e.airport_movements = 0;
        records.push_back(e);

        dea::DmuYearRecord f;
        f.dmu = {"FFF", "volatile"};
        f.year = 2008 + i;
        f.atco_hours = 2000;
        f.non_atco_share = f_share[i];
        f.acc_count = 1;
        f.tower_count = 1;
        f.flight_hours = 1000;
        f.airport_movements = 0;
        records.push_back(f);
    }
    auto panel = dea::Panel::from_records(std::move(records));

    dea::ModelSpec spec;
    spec.name = "vol";
    spec.input_factors = {dea::Factor::AtcoHours, dea::Factor::NonAtcoShare};
    spec.output_factors = {dea::Factor::FlightHours};

    auto report = dea::run_study(
        panel, small_plan({spec}, panel.years(), {Rts::Crs}, {Method::Radial, Method::Sbm}));
    auto radial_rows = dea::dispersion(report, "vol", Rts::Crs, Method::Radial);
    auto sbm_rows = dea::dispersion(report, "vol", Rts::Crs, Method::Sbm);

    auto median_iqr = [](const std::vector<dea::DmuDispersion>& rows) {
        std::vector<double> iqrs;
        for (const auto& r : rows) iqrs.push_back(r.iqr);
        std::sort(iqrs.begin(), iqrs.end());
        return dea::stats::quantile_sorted(iqrs, 0.5);
    };
    CHECK(median_iqr(sbm_rows) > median_iqr(radial_rows));
}

TEST_CASE("model averages: excluding the dominant unit lifts the mean") {
    auto panel = synthetic::planted_outlier_panel(8, 2014, 2016);
    auto with_dom = dea::builtin_model("2A");
    with_dom.name = "9A";
    auto without_dom = dea::builtin_model("2A");
    without_dom.name = "9B";
    without_dom.excluded_dmus = {"DOM"};

    auto report = dea::run_study(panel, small_plan({with_dom, without_dom}, panel.years()));
    auto averages = dea::model_averages(report);
    REQUIRE(averages.count("9A") == 1);
    REQUIRE(averages.count("9B") == 1);
    CHECK(averages.at("9B").mean_all > averages.at("9A").mean_all);
    REQUIRE(averages.at("9A").mean_shared.has_value());
    // shared aggregate drops DOM from the 9A side as well
    CHECK(*averages.at("9A").mean_shared == doctest::Approx(0.5));
    CHECK(report.model_averages.at("9A").mean_all == averages.at("9A").mean_all);
}

TEST_CASE("all scores 1 average to 1") {
    auto panel = synthetic::planted_outlier_panel(5, 2015, 2016);
    std::vector<dea::DmuYearRecord> peers;
    for (const auto& rec : panel.records())
        if (rec.dmu.code != "DOM") peers.push_back(rec);
    auto homogeneous = dea::Panel::from_records(std::move(peers));
    auto report = dea::run_study(homogeneous, small_plan({dea::builtin_model("2A")}, {2015, 2016}));
    CHECK(dea::model_averages(report).at("2A").mean_all == doctest::Approx(1.0));
}

TEST_CASE("the five-factor model classifies at least as many units efficient") {
    auto panel = synthetic::make_panel({.n_dmus = 14, .year_from = 2015, .year_to = 2016, .seed = 77});
    auto report = dea::run_study(panel, small_plan({dea::builtin_model("1A"), dea::builtin_model("2A")},
                                                   {2015, 2016}, {Rts::Crs, Rts::Vrs}));
    for (int year : {2015, 2016}) {
        for (Rts rts : {Rts::Crs, Rts::Vrs}) {
            auto efficient = [&](const std::string& model) {
                std::set<std::string> codes;
                const auto& table = report.tables.at(TableKey{model, year, rts, Method::Radial});
                for (const auto& r : table.results)
                    if (r.score == 1.0) codes.insert(r.dmu.code);
                return codes;
            };
            auto wide = efficient("1A");
            auto narrow = efficient("2A");
            CHECK(std::includes(wide.begin(), wide.end(), narrow.begin(), narrow.end()));
            CHECK(wide.size() >= narrow.size());
        }
    }
}

TEST_CASE("B-variant scores dominate A-variant scores for shared DMUs") {
    auto panel = synthetic::make_panel({.n_dmus = 12, .year_from = 2016, .year_to = 2017, .seed = 5});
    auto report = dea::run_study(panel, small_plan(dea::builtin_models(), {2016, 2017},
                                                   {Rts::Crs, Rts::Vrs}));
    int compared = 0;
    for (const auto& [key, table] : report.tables) {
        if (key.model.back() != 'A') continue;
        TableKey bkey = key;
        bkey.model.back() = 'B';
        const auto& btable = report.tables.at(bkey);
        std::map<std::string, double> bscores;
        for (const auto& r : btable.results) bscores[r.dmu.code] = r.score;
        for (const auto& r : table.results) {
            auto it = bscores.find(r.dmu.code);
            if (it == bscores.end()) continue;
            CHECK(it->second >= r.score - 1e-6);
            ++compared;
        }
    }
    CHECK(compared > 0);
}

TEST_CASE("VRS mean is at least the CRS mean per cell") {
    auto panel = synthetic::make_panel({.n_dmus = 10, .year_from = 2016, .year_to = 2016, .seed = 31});
    auto report = dea::run_study(
        panel, small_plan(dea::builtin_models(), {2016}, {Rts::Crs, Rts::Vrs}));
    for (const auto& [key, table] : report.tables) {
        if (key.rts != Rts::Crs) continue;
        TableKey vkey = key;
        vkey.rts = Rts::Vrs;
        auto mean_of = [](const dea::ResultTable& t) {
            double sum = 0;
            int n = 0;
            for (const auto& r : t.results)
                if (r.status == dea::SolveStatus::Optimal) {
                    sum += r.score;
                    ++n;
                }
            return sum / n;
        };
        CHECK(mean_of(report.tables.at(vkey)) >= mean_of(table) - 1e-9);
    }
}

TEST_CASE("scale efficiency appears when both RTS are planned") {
    auto panel = synthetic::make_panel({.n_dmus = 8, .year_from = 2016, .year_to = 2016, .seed = 3});
    auto report = dea::run_study(
        panel, small_plan({dea::builtin_model("2A")}, {2016}, {Rts::Crs, Rts::Vrs}));
    REQUIRE(!report.scale_efficiency.empty());
    for (const auto& s : report.scale_efficiency) {
        CHECK(s.value > 0.0);
        CHECK(s.value <= 1.0 + 1e-6);
    }
}

TEST_CASE("study is a pure function of panel, plan and seed") {
    auto panel = synthetic::make_panel({.n_dmus = 8, .year_from = 2015, .year_to = 2017, .seed = 21});
    auto plan = small_plan({dea::builtin_model("2A")}, panel.years(), {Rts::Crs},
                           {Method::Radial, Method::Bootstrap});
    plan.bootstrap.replications = 120;
    plan.bootstrap.seed = 9;
    auto a = dea::run_study(panel, plan);
    auto b = dea::run_study(panel, plan);
    REQUIRE(a.tables.size() == b.tables.size());
    for (const auto& [key, table] : a.tables) {
        const auto& other = b.tables.at(key);
        REQUIRE(table.results.size() == other.results.size());
        for (std::size_t i = 0; i < table.results.size(); ++i)
            CHECK(table.results[i].score == other.results[i].score);  // bitwise
        REQUIRE(table.bootstrap.size() == other.bootstrap.size());
        for (std::size_t i = 0; i < table.bootstrap.size(); ++i) {
            CHECK(table.bootstrap[i].bias == other.bootstrap[i].bias);
            CHECK(table.bootstrap[i].ci_lower == other.bootstrap[i].ci_lower);
        }
    }

    auto seeded = plan;
    seeded.bootstrap.seed = 10;
    auto c = dea::run_study(panel, seeded);
    bool differs = false;
    for (const auto& [key, table] : a.tables)
        for (std::size_t i = 0; i < table.bootstrap.size(); ++i)
            differs |= table.bootstrap[i].bias != c.tables.at(key).bootstrap[i].bias;
    CHECK(differs);
}

TEST_CASE("write_report emits the documented files") {
    auto panel = synthetic::make_panel({.n_dmus = 8, .year_from = 2015, .year_to = 2016, .seed = 13});
    auto plan = small_plan({dea::builtin_model("2A"), dea::builtin_model("2B")}, {2015, 2016},
                           {Rts::Crs, Rts::Vrs},
                           {Method::Radial, Method::SuperEfficiency, Method::Bootstrap});
    plan.bootstrap.replications = 120;
    auto report = dea::run_study(panel, plan);
    auto dir = std::filesystem::temp_directory_path() / "dea_study_report_test";
    std::filesystem::remove_all(dir);
    dea::write_report(report, dir);

    CHECK(std::filesystem::exists(dir / "2A_2015_crs_radial.csv"));
    CHECK(std::filesystem::exists(dir / "2B_2016_vrs_super.csv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "boxplot_data.csv"));
    CHECK(std::filesystem::exists(dir / "map_data.csv"));
    CHECK(std::filesystem::exists(dir / "bootstrap_detail.csv"));

    std::ifstream csv(dir / "2A_2015_crs_radial.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "dmu,score,rank,status");

    std::ifstream js(dir / "summary.json");
    auto summary = nlohmann::json::parse(js);
    CHECK(summary["tables_completed"].get<int>() == static_cast<int>(report.tables.size()));
    CHECK(summary.contains("model_averages"));
    CHECK(summary.contains("dispersion"));
    CHECK(summary.contains("outlier"));
    CHECK(!summary["outlier"].is_null());  // super tables were planned
    CHECK(summary["notes"].size() >= 1);   // bootstrap caveat
}
