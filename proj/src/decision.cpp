#include "cryptomcda/decision.hpp"

#include "cryptomcda/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

namespace cryptomcda {

std::string_view to_string(Sense sense) { return sense == Sense::maximize ? "maximize" : "minimize"; }

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::raw: return "raw";
        case Stage::transformed: return "transformed";
        case Stage::normalized: return "normalized";
    }
    return "?";
}

std::string_view to_string(MinTransform transform) {
    return transform == MinTransform::reciprocal ? "reciprocal" : "max-complement";
}

MinTransform parse_min_transform(std::string_view text) {
    if (text == "reciprocal") return MinTransform::reciprocal;
    if (text == "max-complement") return MinTransform::max_complement;
    throw ConfigError(fmt::format("unknown min-transform '{}' (reciprocal | max-complement)", text));
}

const std::vector<CriterionSpec>& standard_criteria() {
    static const std::vector<CriterionSpec> specs{
        {"xRV", Sense::maximize, "mean window return"},
        {"sRV", Sense::minimize, "window return standard deviation"},
        {"xVV", Sense::maximize, "mean window volume (USD)"},
        {"sVV", Sense::minimize, "window volume standard deviation (USD)"},
        {"xm", Sense::maximize, "mean slope of close vs volume trend"},
        {"xR2", Sense::maximize, "mean R^2 of the window trend"},
    };
    return specs;
}

DecisionMatrix::DecisionMatrix(std::vector<std::string> alternatives, std::vector<CriterionSpec> criteria,
                               std::vector<double> values, Stage stage, std::string transform)
    : alternatives_(std::move(alternatives)),
      criteria_(std::move(criteria)),
      values_(std::move(values)),
      stage_(stage),
      transform_(std::move(transform)) {
    if (alternatives_.size() < 2)
        throw ContractError(fmt::format("decision matrix needs >= 2 alternatives, got {}", alternatives_.size()));
    if (criteria_.empty()) throw ContractError("decision matrix needs >= 1 criterion");
    if (values_.size() != alternatives_.size() * criteria_.size())
        throw ContractError(fmt::format("decision matrix has {} values for {}x{}", values_.size(),
                                        alternatives_.size(), criteria_.size()));
    std::set<std::string> ids;
    for (const auto& c : criteria_)
        if (!ids.insert(c.id).second) throw ValidationError(fmt::format("duplicate criterion id '{}'", c.id));
    std::set<std::string> names;
    for (const auto& a : alternatives_)
        if (!names.insert(a).second) throw ValidationError(fmt::format("duplicate alternative '{}'", a));
    for (double v : values_)
        if (!std::isfinite(v)) throw ValidationError("decision matrix contains a non-finite value");
    if (stage_ == Stage::normalized) {
        for (std::size_t j = 0; j < cols(); ++j) {
            double ss = 0.0;
            for (std::size_t i = 0; i < rows(); ++i) ss += at(i, j) * at(i, j);
            if (std::abs(std::sqrt(ss) - 1.0) > 1e-9)
                throw ContractError(fmt::format("normalized criterion {} has norm {}", criteria_[j].id, std::sqrt(ss)));
        }
    }
}

std::vector<double> DecisionMatrix::column(std::size_t j) const {
    std::vector<double> out(rows());
    for (std::size_t i = 0; i < rows(); ++i) out[i] = at(i, j);
    return out;
}

bool DecisionMatrix::all_maximize() const {
    return std::all_of(criteria_.begin(), criteria_.end(), [](const auto& c) { return c.sense == Sense::maximize; });
}

DecisionMatrix assemble(std::span<const CriteriaRow> rows) {
    std::vector<const CriteriaRow*> sorted;
    for (const auto& r : rows) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->symbol < b->symbol; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i]->symbol == sorted[i - 1]->symbol)
            throw ValidationError(fmt::format("duplicate symbol '{}'", sorted[i]->symbol));

    std::vector<std::string> alternatives;
    std::vector<double> values;
    for (const auto* r : sorted) {
        alternatives.push_back(r->symbol);
        values.insert(values.end(),
                      {r->mean_return, r->std_return, r->mean_volume, r->std_volume, r->mean_slope, r->mean_r2});
    }
    return DecisionMatrix(std::move(alternatives), standard_criteria(), std::move(values), Stage::raw);
}

DecisionMatrix transform_min_to_max(const DecisionMatrix& matrix, const TransformOptions& options,
                                    Diagnostics* diagnostics) {
    if (matrix.stage() != Stage::raw) throw ContractError("transform_min_to_max expects a raw matrix");
    if (options.epsilon && !(*options.epsilon > 0.0)) throw ConfigError("min-transform epsilon must be > 0");

    std::vector<double> values = matrix.values();
    std::vector<CriterionSpec> criteria = matrix.criteria();
    const std::size_t n = matrix.rows();
    const std::size_t m = matrix.cols();

    for (std::size_t j = 0; j < m; ++j) {
        if (criteria[j].sense != Sense::minimize) continue;
        if (options.kind == MinTransform::reciprocal) {
            for (std::size_t i = 0; i < n; ++i) {
                double& x = values[i * m + j];
                if (options.epsilon && x < *options.epsilon) {
                    if (diagnostics)
                        diagnostics->warn(fmt::format("epsilon substitution: {}/{} {} -> {}",
                                                      matrix.alternatives()[i], criteria[j].id,
                                                      format_number(x), format_number(*options.epsilon)));
                    x = *options.epsilon;
                }
                if (!(x > 0.0))
                    throw DomainError(fmt::format("cannot take reciprocal of {} at alternative {}, criterion {}",
                                                  format_number(x), matrix.alternatives()[i], criteria[j].id));
                x = 1.0 / x;
            }
        } else {
            double top = values[j];
            for (std::size_t i = 1; i < n; ++i) top = std::max(top, values[i * m + j]);
            for (std::size_t i = 0; i < n; ++i) values[i * m + j] = top - values[i * m + j];
        }
        criteria[j].sense = Sense::maximize;
    }

    std::string label(to_string(options.kind));
    if (options.kind == MinTransform::reciprocal && options.epsilon)
        label += fmt::format(" (epsilon {})", format_number(*options.epsilon));
    return DecisionMatrix(matrix.alternatives(), std::move(criteria), std::move(values), Stage::transformed,
                          std::move(label));
}

DecisionMatrix normalize_vector_modulus(const DecisionMatrix& matrix, Diagnostics* diagnostics) {
    if (matrix.stage() != Stage::transformed)
        throw ContractError("normalize_vector_modulus expects a transformed matrix");

    std::vector<double> values = matrix.values();
    const std::size_t n = matrix.rows();
    const std::size_t m = matrix.cols();
    for (std::size_t j = 0; j < m; ++j) {
        double norm = 0.0;
        bool has_neg = false, has_pos = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = values[i * m + j];
            norm += x * x;
            has_neg |= x < 0.0;
            has_pos |= x > 0.0;
        }
        if (norm == 0.0)
            throw DegenerateError(fmt::format("criterion {} is all zero and cannot be normalized",
                                              matrix.criteria()[j].id));
        if (has_neg && has_pos && diagnostics)
            diagnostics->warn(fmt::format("criterion {} has mixed signs; normalized as-is", matrix.criteria()[j].id));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) values[i * m + j] /= norm;
    }
    return DecisionMatrix(matrix.alternatives(), matrix.criteria(), std::move(values), Stage::normalized,
                          matrix.transform());
}

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    return fmt::format("{:.9g}", value);
}

void write_matrix_csv(std::ostream& out, const DecisionMatrix& matrix) {
    out << "symbol";
    for (const auto& c : matrix.criteria()) out << ',' << c.id;
    out << '\n';
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out << matrix.alternatives()[i];
        for (double v : matrix.row(i)) out << ',' << format_number(v);
        out << '\n';
    }
}

void write_matrix_meta(std::ostream& out, const DecisionMatrix& matrix) {
    out << "stage: " << to_string(matrix.stage()) << '\n';
    out << "transform: " << matrix.transform() << '\n';
    out << "alternatives: " << matrix.rows() << '\n';
    out << "criteria:\n";
    for (const auto& c : matrix.criteria()) out << "  " << c.id << ": " << to_string(c.sense) << '\n';
}

nlohmann::json to_json(const DecisionMatrix& matrix) {
    nlohmann::json criteria = nlohmann::json::array();
    for (const auto& c : matrix.criteria())
        criteria.push_back({{"id", c.id}, {"sense", to_string(c.sense)}, {"description", c.description}});
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        auto r = matrix.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {{"stage", to_string(matrix.stage())},
            {"transform", matrix.transform()},
            {"alternatives", matrix.alternatives()},
            {"criteria", std::move(criteria)},
            {"values", std::move(rows)}};
}

DecisionMatrix read_matrix_csv(std::istream& in, const std::vector<CriterionSpec>& criteria) {
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            out.push_back(cell);
        }
        return out;
    };

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("symbol");
    const auto header = split(line);
    if (header.empty() || header[0] != "symbol") throw SchemaError("symbol");
    for (std::size_t j = 0; j < criteria.size(); ++j)
        if (j + 1 >= header.size() || header[j + 1] != criteria[j].id) throw SchemaError(criteria[j].id);
    if (header.size() != criteria.size() + 1)
        throw ValidationError(fmt::format("unexpected extra column '{}'", header[criteria.size() + 1]));

    std::vector<std::string> alternatives;
    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw RowError(row, fmt::format("expected {} fields, got {}", header.size(), cells.size()));
        alternatives.push_back(cells[0]);
        for (std::size_t j = 1; j < cells.size(); ++j) {
            double v = 0.0;
            const auto& s = cells[j];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size())
                throw RowError(row, fmt::format("unparseable {} '{}'", criteria[j - 1].id, s));
            values.push_back(v);
        }
    }
    return DecisionMatrix(std::move(alternatives), criteria, std::move(values), Stage::raw);
}

}  // namespace cryptomcda
