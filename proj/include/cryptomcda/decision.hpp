#pragma once

#include "cryptomcda/features.hpp"

#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cryptomcda {

enum class Sense { maximize, minimize };
enum class Stage { raw, transformed, normalized };

enum class MinTransform {
    reciprocal,      // x' = 1 / x
    max_complement,  // x' = max(column) - x
};

std::string_view to_string(Sense sense);
std::string_view to_string(Stage stage);
std::string_view to_string(MinTransform transform);
MinTransform parse_min_transform(std::string_view text);

struct CriterionSpec {
    std::string id;
    Sense sense = Sense::maximize;
    std::string description;
};

/// xRV, sRV, xVV, sVV, xm, xR2 with senses max, min, max, min, max, max.
const std::vector<CriterionSpec>& standard_criteria();

/// Warnings collected along the pipeline (mixed-sign columns, epsilon
/// substitutions, dropped columns, degenerate fits).
struct Diagnostics {
    std::vector<std::string> warnings;
    void warn(std::string message) { warnings.push_back(std::move(message)); }
};

/// Alternatives x criteria, row-major. Immutable once built.
class DecisionMatrix {
public:
    DecisionMatrix(std::vector<std::string> alternatives, std::vector<CriterionSpec> criteria,
                   std::vector<double> values, Stage stage = Stage::raw, std::string transform = "none");

    std::size_t rows() const noexcept { return alternatives_.size(); }
    std::size_t cols() const noexcept { return criteria_.size(); }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
    std::vector<double> column(std::size_t j) const;
    std::span<const double> row(std::size_t i) const { return std::span(values_).subspan(i * cols(), cols()); }

    const std::vector<std::string>& alternatives() const noexcept { return alternatives_; }
    const std::vector<CriterionSpec>& criteria() const noexcept { return criteria_; }
    const std::vector<double>& values() const noexcept { return values_; }
    Stage stage() const noexcept { return stage_; }
    const std::string& transform() const noexcept { return transform_; }
    bool all_maximize() const;

private:
    std::vector<std::string> alternatives_;
    std::vector<CriterionSpec> criteria_;
    std::vector<double> values_;
    Stage stage_;
    std::string transform_;
};

/// Raw matrix over the standard criteria, alternatives sorted by symbol.
DecisionMatrix assemble(std::span<const CriteriaRow> rows);

struct TransformOptions {
    MinTransform kind = MinTransform::max_complement;
    // Reciprocal only: entries below epsilon are raised to epsilon first.
    std::optional<double> epsilon;
};

/// Rewrites minimize columns so that larger is better and re-tags them as
/// maximize. Reciprocal requires strictly positive entries.
DecisionMatrix transform_min_to_max(const DecisionMatrix& matrix, const TransformOptions& options = {},
                                    Diagnostics* diagnostics = nullptr);

/// r_ij = x_ij / sqrt(sum_i x_ij^2). Mixed-sign columns are normalized as-is
/// and reported through `diagnostics`.
DecisionMatrix normalize_vector_modulus(const DecisionMatrix& matrix, Diagnostics* diagnostics = nullptr);

/// Fixed 9-significant-digit rendering used by every CSV export.
std::string format_number(double value);

void write_matrix_csv(std::ostream& out, const DecisionMatrix& matrix);
void write_matrix_meta(std::ostream& out, const DecisionMatrix& matrix);
nlohmann::json to_json(const DecisionMatrix& matrix);

/// Reads `symbol,<criterion ids...>` as a raw matrix. The header must list
/// exactly the ids of `criteria`, in order.
DecisionMatrix read_matrix_csv(std::istream& in, const std::vector<CriterionSpec>& criteria = standard_criteria());

}  // namespace cryptomcda
