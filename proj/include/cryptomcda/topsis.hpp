#pragma once

#include "cryptomcda/decision.hpp"
#include "cryptomcda/weighting.hpp"

#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace cryptomcda {

struct TopsisEntry {
    std::string symbol;
    double d_ideal = 0.0;
    double d_anti = 0.0;
    double similarity = 0.0;
    std::size_t rank = 0;  // 1 = best
};

/// Entries follow the matrix's alternative order, not rank order.
struct TopsisResult {
    std::vector<TopsisEntry> entries;
    bool degenerate = false;  // ideal == anti-ideal on every column; similarities are 0.5

    /// Symbols ordered best first.
    std::vector<std::string> ranking() const;
    const TopsisEntry& find(const std::string& symbol) const;
};

struct TopsisOptions {
    // When false a degenerate matrix throws DegenerateError.
    bool allow_degenerate = false;
};

/// Classic TOPSIS on v_ij = w_j r_ij: ideal = column max, anti-ideal = column
/// min, similarity = d_anti / (d_ideal + d_anti). Ranks by descending
/// similarity, ties by ascending symbol.
TopsisResult topsis_rank(const DecisionMatrix& matrix, const WeightVector& weights, const TopsisOptions& options = {});

struct SpearmanPair {
    std::string first;
    std::string second;
    double rho = 0.0;
};

struct AgreementReport {
    std::vector<std::string> labels;
    std::vector<SpearmanPair> spearman;           // every unordered pair, in label order
    std::map<std::string, std::size_t> rank_spread;  // max rank - min rank per alternative
    std::vector<std::string> always_top2;          // ranked top-2 by every result, sorted

    double rho(const std::string& a, const std::string& b) const;
};

/// Spearman rho for two rankings without ties: 1 - 6 sum d^2 / (n (n^2 - 1)).
double spearman(const std::vector<std::size_t>& ranks_a, const std::vector<std::size_t>& ranks_b);

AgreementReport compare_rankings(const std::vector<TopsisResult>& results, const std::vector<std::string>& labels);

nlohmann::json to_json(const AgreementReport& report);

}  // namespace cryptomcda
