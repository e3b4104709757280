#pragma once

#include <span>

namespace cryptomcda::stats {

double mean(std::span<const double> values);

/// Two-pass standard deviation with `ddof` delta degrees of freedom
/// (0 = population, 1 = sample). Requires values.size() > ddof.
double stddev(std::span<const double> values, int ddof);

/// Pearson correlation; NaN when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace cryptomcda::stats
