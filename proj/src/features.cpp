#include "cryptomcda/features.hpp"

#include "cryptomcda/error.hpp"
#include "cryptomcda/stats.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace cryptomcda {

std::vector<RecordSlice> enumerate_windows(const OhlcvSeries& series, const WindowSpec& spec) {
    if (spec.length < 2) throw ContractError(fmt::format("window length must be >= 2, got {}", spec.length));
    if (spec.stride < 1) throw ContractError("window stride must be >= 1");
    const std::size_t n = series.size();
    if (n < spec.length)
        throw InsufficientDataError(fmt::format("{}: {} records is fewer than window length {}", series.symbol, n,
                                                spec.length));

    std::vector<RecordSlice> windows;
    windows.reserve((n - spec.length) / spec.stride + 1);
    const RecordSlice all(series.records);
    for (std::size_t start = 0; start + spec.length <= n; start += spec.stride)
        windows.push_back(all.subspan(start, spec.length));
    return windows;
}

double window_return(RecordSlice slice) {
    if (slice.empty()) throw ContractError("window_return on an empty slice");
    const double first = slice.front().close;
    if (!(first > 0.0)) throw DomainError(fmt::format("degenerate price: first close {} is not positive", first));
    return (slice.back().close - first) / first;
}

double window_volume(RecordSlice slice) {
    if (slice.empty()) throw ContractError("window_volume on an empty slice");
    double total = 0.0;
    for (const auto& r : slice) total += r.volume;
    return total;
}

TrendFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ContractError("fit_line needs >= 2 paired points");
    const double mx = stats::mean(x);
    const double my = stats::mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return {0.0, 0.0, true};

    TrendFit fit;
    fit.slope = sxy / sxx;
    fit.r_squared = std::clamp((sxy / sxx) * (sxy / syy), 0.0, 1.0);
    return fit;
}

TrendFit window_trend(RecordSlice slice, TrendOrientation orientation) {
    std::vector<double> volume, close;
    volume.reserve(slice.size());
    close.reserve(slice.size());
    for (const auto& r : slice) {
        volume.push_back(r.volume);
        close.push_back(r.close);
    }
    return orientation == TrendOrientation::close_on_volume ? fit_line(volume, close) : fit_line(close, volume);
}

WindowStats window_stats(RecordSlice slice, TrendOrientation orientation) {
    const TrendFit trend = window_trend(slice, orientation);
    return {window_return(slice), window_volume(slice), trend.slope, trend.r_squared, trend.degenerate};
}

CriteriaRow criteria_row(const OhlcvSeries& series, const WindowSpec& spec, const FeatureOptions& options) {
    const auto windows = enumerate_windows(series, spec);
    if (windows.size() < 2)
        throw InsufficientDataError(fmt::format("{}: {} window(s) of length {}; at least 2 are needed",
                                                series.symbol, windows.size(), spec.length));

    std::vector<double> returns, volumes, slopes, r2s;
    CriteriaRow row;
    row.symbol = series.symbol;
    for (const auto& w : windows) {
        const WindowStats s = window_stats(w, options.orientation);
        returns.push_back(s.window_return);
        volumes.push_back(s.window_volume);
        slopes.push_back(s.slope);
        r2s.push_back(s.r_squared);
        if (s.degenerate_fit) ++row.degenerate_fits;
    }
    row.window_count = windows.size();
    row.mean_return = stats::mean(returns);
    row.std_return = stats::stddev(returns, options.ddof);
    row.mean_volume = stats::mean(volumes);
    row.std_volume = stats::stddev(volumes, options.ddof);
    row.mean_slope = stats::mean(slopes);
    row.mean_r2 = std::clamp(stats::mean(r2s), 0.0, 1.0);
    return row;
}

}  // namespace cryptomcda
