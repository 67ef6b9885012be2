#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dea/composites.hpp"
#include "dea/types.hpp"

namespace dea {

/// One super-efficiency evaluation in the (model, year, rts) grid.
struct ScreenCell {
    std::string model;
    int year = 0;
    Rts rts = Rts::Crs;
    std::string dmu_code;
    double score = 0.0;     // NaN when infeasible
    bool infeasible = false;
};

struct ScreenFailure {
    std::string model;
    int year = 0;
    Rts rts = Rts::Crs;
    std::string reason;
};

struct DmuHitStats {
    int runs = 0;
    int hits = 0;  // score > threshold, or infeasible (unmatched extreme)
    double max_score = 0.0;
    double hit_share() const { return runs == 0 ? 0.0 : static_cast<double>(hits) / runs; }
};

struct OutlierReport {
    double threshold = 1.5;
    double min_hit_share = 0.5;
    std::string rule;
    std::vector<ScreenCell> cells;
    std::vector<ScreenFailure> failures;
    std::map<std::string, DmuHitStats> per_dmu;
    std::set<std::string> flagged;

    std::string to_json() const;
    void print_table(std::ostream& os) const;
};

/// Runs super-efficiency for every (spec, year, rts in {CRS, VRS}) cell and
/// flags DMUs whose share of extreme runs reaches min_hit_share. Infeasible
/// runs count as extreme. Screening is advisory: exclusion happens only
/// through ModelSpec.excluded_dmus.
OutlierReport screen(const Panel& panel, const std::vector<ModelSpec>& specs,
                     const std::vector<int>& years, double threshold = 1.5,
                     double min_hit_share = 0.5, const WeightScheme& weights = {});

/// Flagging core shared with reports derived from already-computed grids.
void flag_outliers(OutlierReport& report);

}  // namespace dea
