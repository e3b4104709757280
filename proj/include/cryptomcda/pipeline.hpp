#pragma once

#include "cryptomcda/decision.hpp"
#include "cryptomcda/features.hpp"
#include "cryptomcda/ingest.hpp"
#include "cryptomcda/topsis.hpp"
#include "cryptomcda/weighting.hpp"

#include <filesystem>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cryptomcda {

enum class OutputFormat { csv, json, both };

OutputFormat parse_output_format(std::string_view text);
std::string_view to_string(OutputFormat format);
TrendOrientation parse_trend_orientation(std::string_view text);
std::string_view to_string(TrendOrientation orientation);

/// Nine large-cap, non-stablecoin assets.
const std::vector<std::string>& default_symbols();

// Defaults reproduce the reference experiment; only data_dir must be set.
struct RunConfig {
    std::filesystem::path data_dir;
    std::vector<std::string> symbols = default_symbols();
    Date start_date{std::chrono::year{2018}, std::chrono::month{10}, std::chrono::day{9}};
    Date end_date{std::chrono::year{2021}, std::chrono::month{7}, std::chrono::day{6}};
    std::vector<std::size_t> window_lengths{7, 15};
    std::size_t stride = 1;
    int ddof = 1;
    MinTransform min_transform = MinTransform::max_complement;
    std::optional<double> min_transform_epsilon;
    TrendOrientation trend_orientation = TrendOrientation::close_on_volume;
    CriticScaling critic_scaling = CriticScaling::min_max;
    ConstantColumnPolicy critic_constant_column = ConstantColumnPolicy::error;
    std::filesystem::path output_dir = "out";
    OutputFormat format = OutputFormat::both;
    std::map<std::string, std::string> symbol_map;  // file Name -> ticker, for CSVs without a Symbol column
};

/// Throws ConfigError on an invalid combination.
void validate(const RunConfig& config);

/// Overlays the keys present in a JSON config file onto `base`.
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});
nlohmann::json to_json(const RunConfig& config);

struct WindowReport {
    std::size_t window = 0;
    std::vector<CriteriaRow> rows;  // empty when the matrix was supplied directly
    DecisionMatrix raw;
    DecisionMatrix transformed;
    DecisionMatrix normalized;
    std::vector<WeightVector> weights;    // all_weight_methods order
    std::vector<TopsisResult> rankings;   // parallel to weights
    AgreementReport agreement;
};

struct WindowStability {
    WeightMethod method;
    std::map<std::size_t, std::vector<std::string>> top2;  // window -> sorted top-2 symbols
    bool stable = true;                                     // same top-2 set for every window
};

struct RunReport {
    RunConfig config;
    std::optional<AlignmentReport> alignment;
    std::vector<WindowReport> windows;
    std::vector<WindowStability> stability;
    std::vector<std::string> warnings;
};

/// Ingests the configured symbols and trims them to the configured dates.
std::vector<OhlcvSeries> ingest_all(const RunConfig& config);

/// transform -> normalize -> four weightings -> TOPSIS for one raw matrix.
WindowReport analyze_window(std::size_t window, const DecisionMatrix& raw, const RunConfig& config,
                            Diagnostics& diagnostics);

/// The full computation without touching the output directory.
RunReport build_report(const RunConfig& config);

/// Starts from raw criteria matrices (window -> matrix) instead of OHLCV files.
RunReport build_report_from_matrices(const std::map<std::size_t, DecisionMatrix>& raw, const RunConfig& config);

/// Writes matrix_<w>_<stage>.{csv,meta,json}, weights.csv, topsis.csv,
/// agreement.json and run_report.json according to config.format.
void write_outputs(const RunReport& report);

/// Long-format plot tables: plot_weights.csv and plot_similarity.csv.
void emit_plot_data(const RunReport& report);

/// build_report + write_outputs + emit_plot_data.
RunReport run(const RunConfig& config);

nlohmann::json to_json(const RunReport& report);

}  // namespace cryptomcda
