#pragma once

#include "cryptomcda/decision.hpp"

#include <array>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace cryptomcda {

enum class WeightMethod { mean, stddev, entropy, critic };

inline constexpr std::array<WeightMethod, 4> all_weight_methods{WeightMethod::mean, WeightMethod::stddev,
                                                                 WeightMethod::entropy, WeightMethod::critic};

std::string_view to_string(WeightMethod method);

/// Nonnegative weights summing to 1, one per criterion. raw_scores holds the
/// pre-normalization score (sigma_j, H_j or C_j; 1 for the mean method).
struct WeightVector {
    WeightMethod method = WeightMethod::mean;
    std::vector<std::string> criteria;
    std::vector<double> weights;
    std::vector<double> raw_scores;
};

enum class CriticScaling {
    min_max,  // sigma_j taken on (x - worst) / (best - worst), the original CRITIC construction
    none,     // sigma_j taken on the normalized scores directly
};

enum class ConstantColumnPolicy { error, drop };

CriticScaling parse_critic_scaling(std::string_view text);
ConstantColumnPolicy parse_constant_column_policy(std::string_view text);
std::string_view to_string(CriticScaling scaling);
std::string_view to_string(ConstantColumnPolicy policy);

struct CriticOptions {
    int ddof = 1;
    CriticScaling scaling = CriticScaling::min_max;
    ConstantColumnPolicy constant_column = ConstantColumnPolicy::error;
};

struct WeightingOptions {
    int ddof = 1;
    CriticScaling critic_scaling = CriticScaling::min_max;
    ConstantColumnPolicy critic_constant_column = ConstantColumnPolicy::error;
};

/// w_j = 1/m. Accepts a matrix at any stage.
WeightVector mean_weights(const DecisionMatrix& matrix);

/// w_j = sigma_j / sum sigma_k. Throws DegenerateError when every column is constant.
WeightVector stddev_weights(const DecisionMatrix& matrix, int ddof = 1);

/// w_j = H_j / sum H_k with H_j = sum_i p_ij log(1/p_ij) and p_ij the column
/// share of alternative i. High-entropy (flat) criteria get MORE weight; this
/// is not the 1 - e_j divergence variant. The result does not depend on
/// `log_base`.
WeightVector entropy_weights(const DecisionMatrix& matrix, double log_base = std::numbers::e);

/// C_j = sigma_j * sum_k (1 - r_jk), w_j = C_j / sum C_k, with r the Pearson
/// correlation between columns.
WeightVector critic_weights(const DecisionMatrix& matrix, const CriticOptions& options = {},
                            Diagnostics* diagnostics = nullptr);

struct MethodFailure {
    WeightMethod method;
    std::string message;
};

struct WeightingOutcome {
    std::vector<WeightVector> vectors;  // successes, in all_weight_methods order
    std::vector<MethodFailure> failures;
    bool complete() const noexcept { return failures.empty(); }
};

WeightingOutcome compute_all(const DecisionMatrix& matrix, const WeightingOptions& options = {},
                             Diagnostics* diagnostics = nullptr);

}  // namespace cryptomcda
