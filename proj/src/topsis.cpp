#include "cryptomcda/topsis.hpp"

#include "cryptomcda/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

namespace cryptomcda {

std::vector<std::string> TopsisResult::ranking() const {
    std::vector<std::string> out(entries.size());
    for (const auto& e : entries) out.at(e.rank - 1) = e.symbol;
    return out;
}

const TopsisEntry& TopsisResult::find(const std::string& symbol) const {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.symbol == symbol; });
    if (it == entries.end()) throw ContractError(fmt::format("no TOPSIS entry for {}", symbol));
    return *it;
}

TopsisResult topsis_rank(const DecisionMatrix& matrix, const WeightVector& weights, const TopsisOptions& options) {
    if (matrix.stage() != Stage::normalized) throw ContractError("topsis_rank expects a normalized matrix");
    if (!matrix.all_maximize()) throw ContractError("topsis_rank expects every criterion to be maximize");
    const std::size_t n = matrix.rows();
    const std::size_t m = matrix.cols();
    if (weights.weights.size() != m)
        throw ContractError(fmt::format("weight vector has {} entries for {} criteria", weights.weights.size(), m));
    for (double w : weights.weights)
        if (!(w >= 0.0) || !std::isfinite(w)) throw ContractError("weights must be finite and nonnegative");

    std::vector<double> weighted(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) weighted[i * m + j] = weights.weights[j] * matrix.at(i, j);

    std::vector<double> ideal(m), anti(m);
    bool flat = true;
    for (std::size_t j = 0; j < m; ++j) {
        ideal[j] = anti[j] = weighted[j];
        for (std::size_t i = 1; i < n; ++i) {
            ideal[j] = std::max(ideal[j], weighted[i * m + j]);
            anti[j] = std::min(anti[j], weighted[i * m + j]);
        }
        flat &= ideal[j] == anti[j];
    }
    if (flat && !options.allow_degenerate)
        throw DegenerateError("TOPSIS is degenerate: ideal and anti-ideal coincide on every criterion");

    TopsisResult result;
    result.degenerate = flat;
    for (std::size_t i = 0; i < n; ++i) {
        double plus = 0.0, minus = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double v = weighted[i * m + j];
            plus += (v - ideal[j]) * (v - ideal[j]);
            minus += (v - anti[j]) * (v - anti[j]);
        }
        TopsisEntry e;
        e.symbol = matrix.alternatives()[i];
        e.d_ideal = std::sqrt(plus);
        e.d_anti = std::sqrt(minus);
        const double denom = e.d_ideal + e.d_anti;
        e.similarity = denom > 0.0 ? e.d_anti / denom : 0.5;
        result.entries.push_back(std::move(e));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = result.entries[a];
        const auto& eb = result.entries[b];
        if (ea.similarity != eb.similarity) return ea.similarity > eb.similarity;
        return ea.symbol < eb.symbol;
    });
    for (std::size_t r = 0; r < n; ++r) result.entries[order[r]].rank = r + 1;
    return result;
}

double AgreementReport::rho(const std::string& a, const std::string& b) const {
    for (const auto& p : spearman)
        if ((p.first == a && p.second == b) || (p.first == b && p.second == a)) return p.rho;
    throw ContractError(fmt::format("no Spearman pair for {} / {}", a, b));
}

double spearman(const std::vector<std::size_t>& ranks_a, const std::vector<std::size_t>& ranks_b) {
    if (ranks_a.size() != ranks_b.size() || ranks_a.size() < 2)
        throw ContractError("spearman needs two rankings of equal length >= 2");
    const double n = static_cast<double>(ranks_a.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < ranks_a.size(); ++i) {
        const double d = static_cast<double>(ranks_a[i]) - static_cast<double>(ranks_b[i]);
        d2 += d * d;
    }
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

AgreementReport compare_rankings(const std::vector<TopsisResult>& results, const std::vector<std::string>& labels) {
    if (results.size() != labels.size()) throw ContractError("compare_rankings: one label per result");
    if (results.empty()) throw ContractError("compare_rankings needs at least one result");

    std::vector<std::string> symbols;
    for (const auto& e : results.front().entries) symbols.push_back(e.symbol);
    std::sort(symbols.begin(), symbols.end());
    for (const auto& r : results) {
        std::vector<std::string> other;
        for (const auto& e : r.entries) other.push_back(e.symbol);
        std::sort(other.begin(), other.end());
        if (other != symbols) throw ContractError("compare_rankings: results cover different alternatives");
    }

    // ranks[k][i] = rank of symbols[i] in result k
    std::vector<std::vector<std::size_t>> ranks;
    for (const auto& r : results) {
        std::vector<std::size_t> row;
        for (const auto& s : symbols) row.push_back(r.find(s).rank);
        ranks.push_back(std::move(row));
    }

    AgreementReport report;
    report.labels = labels;
    for (std::size_t a = 0; a < results.size(); ++a)
        for (std::size_t b = a + 1; b < results.size(); ++b)
            report.spearman.push_back({labels[a], labels[b], spearman(ranks[a], ranks[b])});

    for (std::size_t i = 0; i < symbols.size(); ++i) {
        std::size_t lo = ranks[0][i], hi = ranks[0][i];
        bool top2 = true;
        for (const auto& row : ranks) {
            lo = std::min(lo, row[i]);
            hi = std::max(hi, row[i]);
            top2 &= row[i] <= 2;
        }
        report.rank_spread[symbols[i]] = hi - lo;
        if (top2) report.always_top2.push_back(symbols[i]);
    }
    return report;
}

nlohmann::json to_json(const AgreementReport& report) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : report.spearman) pairs.push_back({{"a", p.first}, {"b", p.second}, {"spearman", p.rho}});
    return {{"labels", report.labels},
            {"spearman", std::move(pairs)},
            {"rank_spread", report.rank_spread},
            {"always_top2", report.always_top2}};
}

}  // namespace cryptomcda
