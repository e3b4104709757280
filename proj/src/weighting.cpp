#include "cryptomcda/weighting.hpp"

#include "cryptomcda/error.hpp"
#include "cryptomcda/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace cryptomcda {

namespace {

void require_normalized(const DecisionMatrix& matrix, WeightMethod method) {
    if (matrix.stage() != Stage::normalized)
        throw ContractError(fmt::format("{} weights expect a normalized matrix, got stage {}", to_string(method),
                                        to_string(matrix.stage())));
}

WeightVector finish(WeightMethod method, const DecisionMatrix& matrix, std::vector<double> scores) {
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total))
        throw DegenerateError(fmt::format("{} weights are degenerate: scores sum to {}", to_string(method), total));

    WeightVector out;
    out.method = method;
    for (const auto& c : matrix.criteria()) out.criteria.push_back(c.id);
    out.weights.reserve(scores.size());
    for (double s : scores) out.weights.push_back(s / total);
    out.raw_scores = std::move(scores);
    return out;
}

// Correlations within 1e-12 of +-1 are exact; rounding noise would otherwise
// turn an annihilated C_j into a tiny positive score.
double snapped_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double r = stats::pearson(x, y);
    if (std::abs(1.0 - r) <= 1e-12) return 1.0;
    if (std::abs(1.0 + r) <= 1e-12) return -1.0;
    return r;
}

bool is_constant(const std::vector<double>& column) {
    return std::all_of(column.begin(), column.end(), [&](double v) { return v == column.front(); });
}

}  // namespace

std::string_view to_string(WeightMethod method) {
    switch (method) {
        case WeightMethod::mean: return "mean";
        case WeightMethod::stddev: return "stddev";
        case WeightMethod::entropy: return "entropy";
        case WeightMethod::critic: return "critic";
    }
    return "?";
}

CriticScaling parse_critic_scaling(std::string_view text) {
    if (text == "min-max") return CriticScaling::min_max;
    if (text == "none") return CriticScaling::none;
    throw ConfigError(fmt::format("unknown critic scaling '{}' (min-max | none)", text));
}

ConstantColumnPolicy parse_constant_column_policy(std::string_view text) {
    if (text == "error") return ConstantColumnPolicy::error;
    if (text == "drop") return ConstantColumnPolicy::drop;
    throw ConfigError(fmt::format("unknown constant-column policy '{}' (error | drop)", text));
}

std::string_view to_string(CriticScaling scaling) { return scaling == CriticScaling::min_max ? "min-max" : "none"; }

std::string_view to_string(ConstantColumnPolicy policy) {
    return policy == ConstantColumnPolicy::error ? "error" : "drop";
}

WeightVector mean_weights(const DecisionMatrix& matrix) {
    const std::size_t m = matrix.cols();
    WeightVector out;
    out.method = WeightMethod::mean;
    for (const auto& c : matrix.criteria()) out.criteria.push_back(c.id);
    out.weights.assign(m, 1.0 / static_cast<double>(m));
    out.raw_scores.assign(m, 1.0);
    return out;
}

WeightVector stddev_weights(const DecisionMatrix& matrix, int ddof) {
    require_normalized(matrix, WeightMethod::stddev);
    std::vector<double> sigma;
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        const auto col = matrix.column(j);
        sigma.push_back(is_constant(col) ? 0.0 : stats::stddev(col, ddof));
    }
    if (std::all_of(sigma.begin(), sigma.end(), [](double s) { return s == 0.0; }))
        throw DegenerateError("stddev weights are degenerate: every criterion is constant");
    return finish(WeightMethod::stddev, matrix, std::move(sigma));
}

WeightVector entropy_weights(const DecisionMatrix& matrix, double log_base) {
    require_normalized(matrix, WeightMethod::entropy);
    if (!(log_base > 0.0) || log_base == 1.0) throw ContractError("entropy log base must be positive and != 1");
    const double log_scale = std::log(log_base);

    std::vector<double> entropy;
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        const auto col = matrix.column(j);
        double total = 0.0;
        for (std::size_t i = 0; i < col.size(); ++i) {
            if (col[i] < 0.0)
                throw DomainError(fmt::format("entropy weights need nonnegative entries; {}/{} is {}",
                                              matrix.alternatives()[i], matrix.criteria()[j].id,
                                              format_number(col[i])));
            total += col[i];
        }
        if (total == 0.0)
            throw DegenerateError(fmt::format("criterion {} is all zero; shares are undefined", matrix.criteria()[j].id));
        double h = 0.0;
        for (double x : col) {
            const double p = x / total;
            if (p > 0.0) h -= p * std::log(p) / log_scale;  // 0 log(1/0) := 0
        }
        entropy.push_back(h);
    }
    if (std::all_of(entropy.begin(), entropy.end(), [](double h) { return h == 0.0; }))
        throw DegenerateError("entropy weights are degenerate: every criterion is concentrated on one alternative");
    return finish(WeightMethod::entropy, matrix, std::move(entropy));
}

WeightVector critic_weights(const DecisionMatrix& matrix, const CriticOptions& options, Diagnostics* diagnostics) {
    require_normalized(matrix, WeightMethod::critic);
    const std::size_t m = matrix.cols();

    std::vector<std::vector<double>> cols(m);
    std::vector<bool> active(m, true);
    for (std::size_t j = 0; j < m; ++j) {
        cols[j] = matrix.column(j);
        if (!is_constant(cols[j])) continue;
        if (options.constant_column == ConstantColumnPolicy::error)
            throw DegenerateError(fmt::format("criterion {} is constant; its correlation is undefined",
                                              matrix.criteria()[j].id));
        active[j] = false;
        if (diagnostics)
            diagnostics->warn(fmt::format("critic: dropped constant criterion {}", matrix.criteria()[j].id));
    }

    if (options.scaling == CriticScaling::min_max) {
        // every column is maximize by now, so best = max and worst = min
        for (std::size_t j = 0; j < m; ++j) {
            if (!active[j]) continue;
            const auto [lo, hi] = std::minmax_element(cols[j].begin(), cols[j].end());
            const double low = *lo, span = *hi - *lo;
            for (double& x : cols[j]) x = (x - low) / span;
        }
    }

    std::vector<double> scores(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        if (!active[j]) continue;
        double conflict = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            if (active[k] && k != j) conflict += 1.0 - snapped_pearson(cols[j], cols[k]);
        scores[j] = stats::stddev(cols[j], options.ddof) * conflict;
    }
    return finish(WeightMethod::critic, matrix, std::move(scores));
}

WeightingOutcome compute_all(const DecisionMatrix& matrix, const WeightingOptions& options, Diagnostics* diagnostics) {
    WeightingOutcome outcome;
    for (WeightMethod method : all_weight_methods) {
        try {
            switch (method) {
                case WeightMethod::mean: outcome.vectors.push_back(mean_weights(matrix)); break;
                case WeightMethod::stddev: outcome.vectors.push_back(stddev_weights(matrix, options.ddof)); break;
                case WeightMethod::entropy: outcome.vectors.push_back(entropy_weights(matrix)); break;
                case WeightMethod::critic:
                    outcome.vectors.push_back(critic_weights(
                        matrix, {options.ddof, options.critic_scaling, options.critic_constant_column}, diagnostics));
                    break;
            }
        } catch (const MathError& e) {
            outcome.failures.push_back({method, e.what()});
        }
    }
    return outcome;
}

}  // namespace cryptomcda
