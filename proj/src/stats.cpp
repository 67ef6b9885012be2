#include "dea/stats.hpp"

#include <algorithm>
#include <cmath>

#include "dea/errors.hpp"

namespace dea::stats {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw Error("mean of empty sample");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw Error("quantile of empty sample");
    if (sorted.size() == 1) return sorted[0];
    double h = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo >= sorted.size() - 1) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

FiveNumber five_number(std::vector<double> values) {
    if (values.empty()) throw Error("five-number summary of empty sample");
    std::sort(values.begin(), values.end());
    FiveNumber f;
    f.min = values.front();
    f.q1 = quantile_sorted(values, 0.25);
    f.median = quantile_sorted(values, 0.5);
    f.q3 = quantile_sorted(values, 0.75);
    f.max = values.back();
    return f;
}

OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("ols needs >= 2 paired points");
    const auto n = static_cast<double>(x.size());
    double mx = mean(x), my = mean(y);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    (void)n;
    if (sxx <= 0) throw Error("ols regressor has no variance");
    OlsFit fit;
    // Sums of squares at rounding-noise level count as no spread; otherwise a
    // constant series would get an arbitrary r-squared from residual noise.
    if (syy <= 1e-18 * (1.0 + my * my)) {
        fit.zero_variance = true;
        fit.slope = 0.0;
        fit.intercept = my;
        fit.r_squared = 0.0;
    } else {
        fit.slope = sxy / sxx;
        fit.intercept = my - fit.slope * mx;
        fit.r_squared = (sxy * sxy) / (sxx * syy);
    }
    return fit;
}

}  // namespace dea::stats
