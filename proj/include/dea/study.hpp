#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dea/bootstrap.hpp"
#include "dea/composites.hpp"
#include "dea/engine.hpp"
#include "dea/model_bank.hpp"
#include "dea/outlier.hpp"
#include "dea/types.hpp"

namespace dea {

/// Full cross-product study: models x years x returns-to-scale x methods.
struct StudyPlan {
    std::vector<ModelSpec> specs;
    std::vector<int> years;
    std::vector<Rts> rts_set = {Rts::Crs, Rts::Vrs};
    std::vector<Method> methods = {Method::Radial};
    BootstrapConfig bootstrap;
    WeightScheme weights;
    double unity_tolerance = 1e-6;
    bool two_stage_slacks = true;
    double trend_r2_threshold = 0.6;
    double outlier_threshold = 1.5;
    double outlier_min_hit_share = 0.5;

    void validate() const;  // throws Error unless all four grid lists are non-empty
};

struct TableKey {
    std::string model;
    int year = 0;
    Rts rts = Rts::Crs;
    Method method = Method::Radial;

    auto operator<=>(const TableKey&) const = default;
    std::string file_stem() const;  // "<model>_<year>_<rts>_<method>"
};

struct ResultTable {
    TableKey key;
    std::vector<DeaResult> results;          // bootstrap tables carry bias-corrected scores
    std::vector<BootstrapResult> bootstrap;  // populated for bootstrap tables only
    std::map<std::string, int> ranks;
};

struct FailedCell {
    TableKey key;
    std::string reason;
};

struct DroppedDmu {
    std::string model;
    int year = 0;
    std::string dmu_code;
    std::string factor;
    std::string reason;
};

struct ModelAverage {
    double mean_all = 0.0;                  // over every Optimal radial score of the model
    std::optional<double> mean_shared;      // restricted to DMUs shared with the A/B sibling
    int n_scores = 0;
};

struct DmuDispersion {
    std::string dmu_code;
    int n_years = 0;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, iqr = 0, stddev = 0;
};

struct TrendResult {
    bool is_trend = false;  // false means fluctuation
    double slope = 0.0;
    double r_squared = 0.0;
    bool zero_spread = false;
    std::string classification() const { return is_trend ? "trend" : "fluctuation"; }
};

struct DmuTrend {
    std::string dmu_code;
    int n_years = 0;
    TrendResult trend;
};

struct ScaleEfficiencyRow {
    std::string model;
    int year = 0;
    std::string dmu_code;
    double value = 0.0;
};

struct StudyReport {
    StudyPlan plan;
    std::map<TableKey, ResultTable> tables;
    std::vector<FailedCell> failed;
    std::vector<DroppedDmu> dropped;
    std::map<std::string, ModelAverage> model_averages;
    std::vector<ScaleEfficiencyRow> scale_efficiency;
    std::optional<OutlierReport> outlier;  // derived from super-efficiency tables when present

    std::size_t planned_cells() const;
};

/// Dense ranking, descending by score; scores equal within unity_tol share a
/// rank. Infeasible super-efficiency results outrank every finite score
/// (unmatched extremes) and tie with each other.
std::map<std::string, int> rank(const std::vector<DeaResult>& table, double unity_tol = 1e-6);

/// OLS of score on year; classified as a trend when r_squared reaches the
/// threshold. A constant series is degenerate: slope 0, flagged zero_spread,
/// classified as fluctuation. Throws InsufficientYears below 3 points.
TrendResult trend_check(const std::vector<std::pair<int, double>>& scores_by_year,
                        double r2_threshold = 0.6);

/// Per-DMU five-number summary of scores across years for one grid slice.
/// Throws InsufficientYears when the slice covers fewer than 2 years.
std::vector<DmuDispersion> dispersion(const StudyReport& report, const std::string& model, Rts rts,
                                      Method method);

/// Per-DMU trend classification across years for one grid slice.
std::vector<DmuTrend> trends(const StudyReport& report, const std::string& model, Rts rts,
                             Method method);

/// Per-model arithmetic mean of Optimal radial scores across DMUs and years.
std::map<std::string, ModelAverage> model_averages(const StudyReport& report);

/// Runs every cell of the plan. Cell failures never abort the study; they
/// are recorded with reasons. Deterministic for fixed (panel, plan) including
/// the bootstrap seed.
StudyReport run_study(const Panel& panel, const StudyPlan& plan);

/// Serializes the report: one CSV per table (dmu,score,rank,status), plus
/// summary.json, boxplot_data.csv, map_data.csv and, when bootstrap tables
/// exist, bootstrap_detail.csv.
void write_report(const StudyReport& report, const std::filesystem::path& out_dir);

}  // namespace dea
