#pragma once

#include <cstdint>
#include <vector>

#include "dea/engine.hpp"
#include "dea/types.hpp"

namespace dea {

struct BootstrapConfig {
    int replications = 1000;
    std::uint64_t seed = 0;
    enum class BandwidthRule { SilvermanReflected } bandwidth_rule = BandwidthRule::SilvermanReflected;
    double confidence_level = 0.95;

    void validate() const;  // replications >= 1, confidence_level in (0,1)
};

struct BootstrapResult {
    DmuId dmu;
    double original_score = 0.0;
    double bias = 0.0;
    double bias_corrected_score = 0.0;
    double ci_lower = 0.0;  // NaN when replications < 100
    double ci_upper = 0.0;
};

/// Smoothed homogeneous bootstrap of input-oriented radial scores.
///
/// Procedure, per replication b with a generator seeded from (seed, b):
///   1. base scores theta_j from radial DEA under cfg.rts;
///   2. reflected sample D = {theta_j} u {2 - theta_j};
///   3. bandwidth h = 0.9 * min(sd(D), IQR(D)/1.34) * (2n)^(-1/5);
///   4. draw d_j uniformly from D, add h*eps with eps ~ N(0,1), rescale
///      around the replication draw mean by 1/sqrt(1 + h^2/var(D)), and
///      fold the result back into (0,1];
///   5. scale DMU j's inputs by theta_j / draw_j to form the pseudo
///      reference set;
///   6. re-solve every original DMU against the pseudo reference set;
///   7. bias_j = mean_b(theta_bj) - theta_j, corrected score
///      theta_j - bias_j, percentile intervals from {2*theta_j - theta_bj}.
///
/// Deterministic for a fixed (fm, cfg, bcfg); replication seeds are derived
/// up front so a parallel schedule could not change results. Throws
/// DegenerateSample when all base scores coincide (zero bandwidth).
std::vector<BootstrapResult> bootstrap_dea(const FactorMatrix& fm, const DeaConfig& cfg,
                                           const BootstrapConfig& bcfg);

}  // namespace dea
