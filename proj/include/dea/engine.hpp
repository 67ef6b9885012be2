#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dea/types.hpp"

namespace dea {

struct DeaConfig {
    Rts rts = Rts::Crs;
    Method method = Method::Radial;
    double unity_tolerance = 1e-6;  // scores this close to 1 are reported as exactly 1
    bool two_stage_slacks = true;   // maximize total slack at the fixed radial optimum
    bool sbm_drop_zero_outputs = true;

    void validate() const;  // throws Error when unity_tolerance is outside (0, 1e-3)
};

/// Input-oriented radial efficiency (CCR under CRS, BCC under VRS) of the
/// DMU at dmu_index. Minimizes the equiproportionate input contraction theta
/// subject to the reference technology spanned by all DMUs; a second-stage
/// LP maximizes total slack at fixed theta when configured.
DeaResult radial_efficiency(const FactorMatrix& fm, std::size_t dmu_index, const DeaConfig& cfg);

/// Radial efficiency with the evaluated DMU removed from the reference set.
/// Scores may exceed 1; under VRS the program may be infeasible, which is
/// reported as status Infeasible (an unmatched extreme unit), not an error.
DeaResult super_efficiency(const FactorMatrix& fm, std::size_t dmu_index, const DeaConfig& cfg);

/// Slack-based measure (non-radial, non-oriented), linearized with the
/// Charnes-Cooper transformation. Outputs of the evaluated DMU that are zero
/// are dropped from the slack average (the constraint row stays); disable
/// via cfg.sbm_drop_zero_outputs to get ZeroOutputUnsupported instead.
DeaResult sbm_efficiency(const FactorMatrix& fm, std::size_t dmu_index, const DeaConfig& cfg);

/// CRS score over VRS score for the same DMU. Throws MismatchedInputs when
/// the results refer to different DMUs or are not both Optimal.
double scale_efficiency(const DeaResult& crs, const DeaResult& vrs);

struct BatchFailure {
    std::string dmu_code;
    std::string message;
};

/// One result per DMU in fm.dmu_order. Per-DMU solver failures are collected
/// instead of aborting the batch; failed DMUs are absent from results.
struct BatchResults {
    std::vector<DeaResult> results;
    std::vector<BatchFailure> failures;
};

BatchResults run_all(const FactorMatrix& fm, const DeaConfig& cfg);

/// Radial score of an arbitrary point measured against the technology
/// spanned by `reference` (the bootstrap re-solve). nullopt when the
/// program is infeasible.
std::optional<double> radial_score_of_point(const FactorMatrix& reference,
                                            const std::vector<double>& x0,
                                            const std::vector<double>& y0, Rts rts);

}  // namespace dea
