#include "cryptomcda/error.hpp"
#include "cryptomcda/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fstream>
#include <iostream>

using namespace cryptomcda;

namespace {

struct Overrides {
    std::string data_dir, config_file, start_date, end_date, min_transform, trend_orientation;
    std::string critic_scaling, critic_constant_column, out, format;
    std::vector<std::size_t> windows;
    std::vector<std::string> symbols;
    std::size_t stride = 1;
    int ddof = 1;
    double epsilon = 0.0;
};

// Options shared by run and rank. Env vars sit between flags and the config file.
struct Registered {
    CLI::Option* config = nullptr;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> apply;
};

Registered add_analysis_options(CLI::App* cmd, Overrides& o) {
    Registered r;
    r.config = cmd->add_option("--config", o.config_file, "JSON config file")->envname("CRYPTOMCDA_CONFIG");
    auto add = [&](CLI::Option* opt, std::function<void(RunConfig&)> fn) { r.apply.emplace_back(opt, std::move(fn)); };

    add(cmd->add_option("--ddof", o.ddof, "standard deviation delta degrees of freedom (0 or 1)")
            ->envname("CRYPTOMCDA_DDOF"),
        [&](RunConfig& c) { c.ddof = o.ddof; });
    add(cmd->add_option("--min-transform", o.min_transform, "reciprocal | max-complement")
            ->envname("CRYPTOMCDA_MIN_TRANSFORM"),
        [&](RunConfig& c) { c.min_transform = parse_min_transform(o.min_transform); });
    add(cmd->add_option("--min-transform-epsilon", o.epsilon, "floor applied before the reciprocal")
            ->envname("CRYPTOMCDA_MIN_TRANSFORM_EPSILON"),
        [&](RunConfig& c) { c.min_transform_epsilon = o.epsilon; });
    add(cmd->add_option("--critic-scaling", o.critic_scaling, "min-max | none")->envname("CRYPTOMCDA_CRITIC_SCALING"),
        [&](RunConfig& c) { c.critic_scaling = parse_critic_scaling(o.critic_scaling); });
    add(cmd->add_option("--critic-constant-column", o.critic_constant_column, "error | drop")
            ->envname("CRYPTOMCDA_CRITIC_CONSTANT_COLUMN"),
        [&](RunConfig& c) { c.critic_constant_column = parse_constant_column_policy(o.critic_constant_column); });
    add(cmd->add_option("--out", o.out, "output directory")->envname("CRYPTOMCDA_OUT"),
        [&](RunConfig& c) { c.output_dir = o.out; });
    add(cmd->add_option("--format", o.format, "csv | json | both")->envname("CRYPTOMCDA_FORMAT"),
        [&](RunConfig& c) { c.format = parse_output_format(o.format); });
    return r;
}

RunConfig resolve(const Registered& r, const Overrides& o) {
    RunConfig config;
    if (r.config->count() > 0) config = load_config_file(o.config_file, config);
    for (const auto& [opt, fn] : r.apply)
        if (opt->count() > 0) fn(config);
    return config;
}

void print_alignment(const AlignmentReport& report) {
    std::cout << "aligned: " << (report.aligned ? "yes" : "no") << " (" << report.union_size << " distinct dates)\n";
    for (const auto& [symbol, dates] : report.missing) {
        std::cout << "  " << symbol << ": " << dates.size() << " missing";
        for (std::size_t i = 0; i < dates.size() && i < 10; ++i) std::cout << (i ? ", " : " ") << format_date(dates[i]);
        if (dates.size() > 10) std::cout << ", ...";
        std::cout << '\n';
    }
}

void print_summary(const RunReport& report) {
    if (report.alignment) print_alignment(*report.alignment);
    std::cout << "min-transform: " << to_string(report.config.min_transform)
              << ", critic scaling: " << to_string(report.config.critic_scaling) << '\n';
    for (const auto& w : report.windows) {
        std::cout << "window " << w.window << ":\n";
        for (std::size_t k = 0; k < w.rankings.size(); ++k) {
            std::cout << fmt::format("  {:<8}", to_string(w.weights[k].method));
            for (const auto& s : w.rankings[k].ranking())
                std::cout << fmt::format(" {}({})", s, format_number(w.rankings[k].find(s).similarity).substr(0, 5));
            std::cout << '\n';
        }
        for (const auto& p : w.agreement.spearman)
            std::cout << fmt::format("  spearman {}/{} = {:.4f}\n", p.first, p.second, p.rho);
    }
    for (const auto& s : report.stability)
        std::cout << fmt::format("top-2 stable across windows ({}): {}\n", to_string(s.method), s.stable ? "yes" : "no");
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Criteria weighting and TOPSIS ranking over OHLCV windows"};
    app.require_subcommand(1);

    Overrides o;
    std::string start_date, end_date;

    auto* run_cmd = app.add_subcommand("run", "full experiment: ingest, features, weights, TOPSIS, reports");
    auto run_opts = add_analysis_options(run_cmd, o);
    auto* data_opt = run_cmd->add_option("--data-dir", o.data_dir, "directory of per-asset CSV files")
                         ->envname("CRYPTOMCDA_DATA_DIR");
    auto* window_opt = run_cmd->add_option("--window", o.windows, "window lengths, e.g. 7,15")
                           ->delimiter(',')
                           ->envname("CRYPTOMCDA_WINDOW");
    auto* symbols_opt = run_cmd->add_option("--symbols", o.symbols, "tickers")->delimiter(',')->envname("CRYPTOMCDA_SYMBOLS");
    auto* start_opt = run_cmd->add_option("--start-date", o.start_date, "YYYY-MM-DD")->envname("CRYPTOMCDA_START_DATE");
    auto* end_opt = run_cmd->add_option("--end-date", o.end_date, "YYYY-MM-DD")->envname("CRYPTOMCDA_END_DATE");
    auto* stride_opt = run_cmd->add_option("--stride", o.stride, "records between window starts")
                           ->envname("CRYPTOMCDA_STRIDE");
    auto* orient_opt = run_cmd->add_option("--trend-orientation", o.trend_orientation,
                                           "close-on-volume | volume-on-close")
                           ->envname("CRYPTOMCDA_TREND_ORIENTATION");

    auto* validate_cmd = app.add_subcommand("validate", "ingest and date-alignment check only");
    std::string validate_dir;
    std::vector<std::string> validate_symbols;
    validate_cmd->add_option("--data-dir", validate_dir, "directory of per-asset CSV files")
        ->required()
        ->envname("CRYPTOMCDA_DATA_DIR");
    auto* vsym = validate_cmd->add_option("--symbols", validate_symbols, "tickers")->delimiter(',');
    auto* vstart = validate_cmd->add_option("--start-date", start_date, "YYYY-MM-DD");
    auto* vend = validate_cmd->add_option("--end-date", end_date, "YYYY-MM-DD");

    auto* rank_cmd = app.add_subcommand("rank", "weights and TOPSIS from raw criteria matrices (WINDOW=FILE)");
    auto rank_opts = add_analysis_options(rank_cmd, o);
    std::vector<std::string> matrices;
    rank_cmd->add_option("--matrix", matrices, "window=path to a symbol,xRV,sRV,xVV,sVV,xm,xR2 CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            RunConfig config = resolve(run_opts, o);
            if (data_opt->count() > 0) config.data_dir = o.data_dir;
            if (window_opt->count() > 0) config.window_lengths = o.windows;
            if (symbols_opt->count() > 0) config.symbols = o.symbols;
            if (start_opt->count() > 0) config.start_date = parse_date_or_throw(o.start_date, "--start-date");
            if (end_opt->count() > 0) config.end_date = parse_date_or_throw(o.end_date, "--end-date");
            if (stride_opt->count() > 0) config.stride = o.stride;
            if (orient_opt->count() > 0) config.trend_orientation = parse_trend_orientation(o.trend_orientation);
            if (config.data_dir.empty()) throw ConfigError("--data-dir is required");
            print_summary(run(config));
            std::cout << "outputs written to " << config.output_dir.string() << '\n';
        } else if (*validate_cmd) {
            RunConfig config;
            config.data_dir = validate_dir;
            if (vsym->count() > 0) config.symbols = validate_symbols;
            if (vstart->count() > 0) config.start_date = parse_date_or_throw(start_date, "--start-date");
            if (vend->count() > 0) config.end_date = parse_date_or_throw(end_date, "--end-date");
            validate(config);
            const auto series = ingest_all(config);
            for (const auto& s : series)
                std::cout << s.symbol << ": " << s.size() << " records " << format_date(s.records.front().date)
                          << " .. " << format_date(s.records.back().date) << '\n';
            const auto report = check_alignment(series);
            print_alignment(report);
        } else if (*rank_cmd) {
            RunConfig config = resolve(rank_opts, o);
            std::map<std::size_t, DecisionMatrix> raw;
            for (const auto& spec : matrices) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos) throw ConfigError(fmt::format("--matrix expects WINDOW=FILE, got '{}'", spec));
                std::size_t window = 0;
                try {
                    window = std::stoul(spec.substr(0, eq));
                } catch (const std::exception&) {
                    throw ConfigError(fmt::format("bad window in --matrix '{}'", spec));
                }
                std::ifstream in(spec.substr(eq + 1));
                if (!in) throw DataError(fmt::format("cannot open {}", spec.substr(eq + 1)));
                raw.emplace(window, read_matrix_csv(in));
            }
            auto report = build_report_from_matrices(raw, config);
            write_outputs(report);
            emit_plot_data(report);
            print_summary(report);
            std::cout << "outputs written to " << config.output_dir.string() << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    return 0;
}
