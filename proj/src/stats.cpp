#include "cryptomcda/stats.hpp"

#include "cryptomcda/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace cryptomcda::stats {

double mean(std::span<const double> values) {
    if (values.empty()) throw ContractError("mean of an empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values, int ddof) {
    if (ddof < 0 || values.size() <= static_cast<std::size_t>(ddof))
        throw ContractError("standard deviation needs more samples than ddof");
    const double mu = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / static_cast<double>(values.size() - static_cast<std::size_t>(ddof)));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ContractError("pearson needs two equal-length samples of size >= 2");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace cryptomcda::stats
