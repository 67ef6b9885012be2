#include "dea/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dea/errors.hpp"
#include "dea/stats.hpp"

namespace dea {

namespace {

constexpr double kScoreFloor = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Pinned distribution helpers on top of mt19937_64, so results do not
// depend on the standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

double gaussian(std::mt19937_64& rng) {
    double u1 = 1.0 - uniform01(rng);  // (0, 1]
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

// Reflect at 1 and 0 until the value lands in (0, 1].
double fold_into_unit(double v) {
    for (int guard = 0; guard < 64 && (v <= 0.0 || v > 1.0); ++guard) {
        if (v > 1.0) v = 2.0 - v;
        else if (v <= 0.0) v = -v;
        if (v == 0.0) break;
    }
    if (v <= 0.0 || v > 1.0) v = kScoreFloor;
    return std::max(v, kScoreFloor);
}

}  // namespace

void BootstrapConfig::validate() const {
    if (replications < 1) throw Error("bootstrap replications must be >= 1");
    if (!(confidence_level > 0.0 && confidence_level < 1.0))
        throw Error("confidence_level must lie in (0, 1)");
}

std::vector<BootstrapResult> bootstrap_dea(const FactorMatrix& fm, const DeaConfig& cfg,
                                           const BootstrapConfig& bcfg) {
    cfg.validate();
    bcfg.validate();
    if (cfg.method != Method::Radial && cfg.method != Method::Bootstrap)
        throw Error("bootstrap applies to radial scores");
    fm.validate(1);

    const std::size_t n = fm.n_dmus();
    DeaConfig base_cfg = cfg;
    base_cfg.method = Method::Radial;
    base_cfg.two_stage_slacks = false;  // only theta is needed here

    std::vector<double> theta(n);
    for (std::size_t j = 0; j < n; ++j) {
        DeaResult r = radial_efficiency(fm, j, base_cfg);
        if (r.status != SolveStatus::Optimal)
            throw SolverFailure("base radial score unavailable for " + fm.dmu_order[j].code);
        theta[j] = r.score;
    }

    // Reflected sample about 1 and Silverman bandwidth on it.
    std::vector<double> reflected;
    reflected.reserve(2 * n);
    for (double t : theta) reflected.push_back(t);
    for (double t : theta) reflected.push_back(2.0 - t);
    const double sd = stats::sample_stddev(reflected);
    if (sd <= 0.0)
        throw DegenerateSample("all radial scores identical; bootstrap bandwidth is zero");
    std::sort(reflected.begin(), reflected.end());
    const double iqr = stats::quantile_sorted(reflected, 0.75) - stats::quantile_sorted(reflected, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    const double h = 0.9 * spread * std::pow(2.0 * static_cast<double>(n), -0.2);
    const double variance = sd * sd;
    const double shrink = 1.0 / std::sqrt(1.0 + h * h / variance);

    const int B = bcfg.replications;
    std::vector<std::uint64_t> rep_seeds(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b)
        rep_seeds[static_cast<std::size_t>(b)] = splitmix64(bcfg.seed ^ splitmix64(static_cast<std::uint64_t>(b) + 1));

    std::vector<std::vector<double>> resampled(n);  // per DMU: theta_bj over replications
    for (auto& v : resampled) v.reserve(static_cast<std::size_t>(B));

    FactorMatrix pseudo = fm;
    std::vector<double> draw(n);
    for (int b = 0; b < B; ++b) {
        std::mt19937_64 rng(rep_seeds[static_cast<std::size_t>(b)]);
        double draw_mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            draw[j] = reflected[uniform_index(rng, reflected.size())];
            draw_mean += draw[j];
        }
        draw_mean /= static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            double smoothed = draw[j] + h * gaussian(rng);
            double corrected = draw_mean + (smoothed - draw_mean) * shrink;
            draw[j] = fold_into_unit(corrected);
        }

        for (std::size_t j = 0; j < n; ++j) {
            const double scale = theta[j] / draw[j];
            for (std::size_t i = 0; i < fm.n_inputs(); ++i)
                pseudo.inputs[j][i] = fm.inputs[j][i] * scale;
        }
        for (std::size_t j = 0; j < n; ++j) {
            auto score = radial_score_of_point(pseudo, fm.inputs[j], fm.outputs[j], cfg.rts);
            if (!score)
                throw SolverFailure("bootstrap re-solve infeasible for " + fm.dmu_order[j].code);
            resampled[j].push_back(*score);
        }
    }

    const double alpha = 1.0 - bcfg.confidence_level;
    const bool report_cis = B >= 100;
    std::vector<BootstrapResult> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        BootstrapResult& r = out[j];
        r.dmu = fm.dmu_order[j];
        r.original_score = theta[j];
        r.bias = stats::mean(resampled[j]) - theta[j];
        r.bias_corrected_score = theta[j] - r.bias;
        if (report_cis) {
            std::vector<double> pivots(resampled[j].size());
            for (std::size_t b = 0; b < pivots.size(); ++b) pivots[b] = 2.0 * theta[j] - resampled[j][b];
            std::sort(pivots.begin(), pivots.end());
            r.ci_lower = stats::quantile_sorted(pivots, alpha / 2.0);
            r.ci_upper = stats::quantile_sorted(pivots, 1.0 - alpha / 2.0);
        } else {
            r.ci_lower = std::numeric_limits<double>::quiet_NaN();
            r.ci_upper = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

}  // namespace dea
