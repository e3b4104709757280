#pragma once

#include "cryptomcda/date.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cryptomcda {

// One trading day. Prices and volume are USD.
struct OhlcvRecord {
    Date date;
    std::optional<double> open;
    std::optional<double> high;
    std::optional<double> low;
    double close = 0.0;
    double volume = 0.0;
    std::optional<double> market_cap;  // kept for completeness, no criterion reads it
};

// Records are strictly increasing by date.
struct OhlcvSeries {
    std::string symbol;
    std::string name;
    std::vector<OhlcvRecord> records;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }
};

/// Parses a Kaggle "Cryptocurrency Historical Prices" style CSV
/// (SNo,Name,Symbol,Date,High,Low,Open,Close,Volume,Marketcap). Only Date,
/// Close and Volume are required; optional columns that fail to parse are
/// treated as absent. The Symbol column wins over `symbol` when present.
///
/// Throws SchemaError for a missing required column, RowError for an
/// unparseable date/close/volume, ValidationError for duplicate dates or
/// price invariants (close > 0, volume >= 0, low <= min(open, close) <=
/// max(open, close) <= high).
OhlcvSeries parse_csv(std::istream& in, const std::string& symbol);

OhlcvSeries load_csv(const std::filesystem::path& path, const std::string& symbol);

/// Writes the series back in the Kaggle column layout.
void write_csv(std::ostream& out, const OhlcvSeries& series);

/// Keeps records with start <= date <= end. Throws EmptyRangeError when
/// nothing survives and ContractError when start > end.
OhlcvSeries filter_date_range(const OhlcvSeries& series, const Date& start, const Date& end);

struct AlignmentReport {
    bool aligned = true;
    std::size_t union_size = 0;
    // symbol -> dates present in some other series but missing from this one
    std::map<std::string, std::vector<Date>> missing;
};

AlignmentReport check_alignment(std::span<const OhlcvSeries> series_set);

/// Maps each CSV in `dir` to a symbol: the Symbol column of the first data
/// row when present, else the file stem with a leading "coin_" removed
/// (looked up in `name_to_symbol` first).
std::map<std::string, std::filesystem::path> discover_files(
    const std::filesystem::path& dir, const std::map<std::string, std::string>& name_to_symbol = {});

}  // namespace cryptomcda
