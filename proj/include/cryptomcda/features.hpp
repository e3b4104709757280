#pragma once

#include "cryptomcda/ingest.hpp"

#include <span>
#include <string>
#include <vector>

namespace cryptomcda {

// Window length and stride count records, not calendar days.
struct WindowSpec {
    std::size_t length = 7;
    std::size_t stride = 1;
};

enum class TrendOrientation {
    close_on_volume,  // x = volume, y = close
    volume_on_close,  // x = close, y = volume
};

struct FeatureOptions {
    int ddof = 1;
    TrendOrientation orientation = TrendOrientation::close_on_volume;
};

struct TrendFit {
    double slope = 0.0;
    double r_squared = 0.0;
    bool degenerate = false;  // regressor or response had zero variance
};

struct WindowStats {
    double window_return = 0.0;
    double window_volume = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    bool degenerate_fit = false;
};

/// The six per-asset criteria, plus diagnostics.
struct CriteriaRow {
    std::string symbol;
    double mean_return = 0.0;   // xRV
    double std_return = 0.0;    // sRV
    double mean_volume = 0.0;   // xVV
    double std_volume = 0.0;    // sVV
    double mean_slope = 0.0;    // xm
    double mean_r2 = 0.0;       // xR2
    std::size_t window_count = 0;
    std::size_t degenerate_fits = 0;
};

using RecordSlice = std::span<const OhlcvRecord>;

/// Overlapping windows in chronological order. The slices view `series`,
/// which must outlive them. Throws InsufficientDataError when the series is
/// shorter than one window, ContractError for length < 2 or stride < 1.
std::vector<RecordSlice> enumerate_windows(const OhlcvSeries& series, const WindowSpec& spec);

/// (close_last - close_first) / close_first.
double window_return(RecordSlice slice);

double window_volume(RecordSlice slice);

/// Ordinary least squares of y on x. Zero variance on either side yields
/// slope 0, R^2 0 and degenerate = true.
TrendFit fit_line(std::span<const double> x, std::span<const double> y);

TrendFit window_trend(RecordSlice slice, TrendOrientation orientation = TrendOrientation::close_on_volume);

WindowStats window_stats(RecordSlice slice, TrendOrientation orientation = TrendOrientation::close_on_volume);

/// Aggregates window statistics into the six criteria. Needs at least two
/// windows so that the deviations are defined.
CriteriaRow criteria_row(const OhlcvSeries& series, const WindowSpec& spec, const FeatureOptions& options = {});

}  // namespace cryptomcda
