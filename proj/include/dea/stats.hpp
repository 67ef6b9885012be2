#pragma once

#include <cstddef>
#include <vector>

namespace dea::stats {

double mean(const std::vector<double>& v);

/// Sample standard deviation (n-1 denominator); 0 when fewer than 2 values.
double sample_stddev(const std::vector<double>& v);

/// Linearly interpolated order statistic (type-7 quantile) on an ascending
/// sorted sample, p in [0,1].
double quantile_sorted(const std::vector<double>& sorted, double p);

struct FiveNumber {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    double iqr() const { return q3 - q1; }
};

FiveNumber five_number(std::vector<double> values);  // sorts a copy

struct OlsFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    bool zero_variance = false;  // response had no spread; r_squared not meaningful
};

/// Ordinary least squares of y on x. Requires x values not all equal.
OlsFit ols(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dea::stats
