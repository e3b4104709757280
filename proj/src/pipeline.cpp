#include "cryptomcda/pipeline.hpp"

#include "cryptomcda/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

namespace cryptomcda {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Re-raises `e` with the failing stage and subject prefixed, keeping its kind.
[[noreturn]] void rethrow_with_context(const Error& e, std::string_view stage, std::string_view subject) {
    throw Error(e.kind(), fmt::format("[{}] {}: {}", stage, subject, e.what()));
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    return out;
}

void write_json(const fs::path& path, const json& doc) {
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError(fmt::format("failed writing {}", path.string()));
}

json weight_to_json(const WeightVector& w) {
    return {{"method", to_string(w.method)}, {"criteria", w.criteria}, {"weights", w.weights},
            {"raw_scores", w.raw_scores}};
}

json topsis_to_json(const TopsisResult& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"symbol", e.symbol}, {"similarity", e.similarity}, {"rank", e.rank},
                           {"d_ideal", e.d_ideal}, {"d_anti", e.d_anti}});
    return {{"degenerate", r.degenerate}, {"entries", std::move(entries)}};
}

json criteria_row_to_json(const CriteriaRow& r) {
    return {{"symbol", r.symbol},       {"xRV", r.mean_return}, {"sRV", r.std_return},
            {"xVV", r.mean_volume},     {"sVV", r.std_volume},  {"xm", r.mean_slope},
            {"xR2", r.mean_r2},         {"windows", r.window_count}, {"degenerate_fits", r.degenerate_fits}};
}

void check_unit_norm(const DecisionMatrix& m, std::size_t window) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double ss = 0.0;
        for (double v : m.column(j)) ss += v * v;
        if (std::abs(std::sqrt(ss) - 1.0) > 1e-9)
            throw ContractError(fmt::format("window {}: normalized criterion {} has norm {}", window,
                                            m.criteria()[j].id, std::sqrt(ss)));
    }
}

std::vector<WindowStability> window_stability(const std::vector<WindowReport>& windows) {
    std::vector<WindowStability> out;
    for (std::size_t k = 0; k < all_weight_methods.size(); ++k) {
        WindowStability s{all_weight_methods[k], {}, true};
        std::optional<std::vector<std::string>> first;
        for (const auto& w : windows) {
            auto ranking = w.rankings.at(k).ranking();
            std::vector<std::string> top(ranking.begin(), ranking.begin() + std::min<std::size_t>(2, ranking.size()));
            std::sort(top.begin(), top.end());
            if (!first) first = top;
            else if (*first != top) s.stable = false;
            s.top2[w.window] = std::move(top);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    if (text == "both") return OutputFormat::both;
    throw ConfigError(fmt::format("unknown format '{}' (csv | json | both)", text));
}

std::string_view to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
        case OutputFormat::both: return "both";
    }
    return "?";
}

TrendOrientation parse_trend_orientation(std::string_view text) {
    if (text == "close-on-volume") return TrendOrientation::close_on_volume;
    if (text == "volume-on-close") return TrendOrientation::volume_on_close;
    throw ConfigError(fmt::format("unknown trend orientation '{}' (close-on-volume | volume-on-close)", text));
}

std::string_view to_string(TrendOrientation orientation) {
    return orientation == TrendOrientation::close_on_volume ? "close-on-volume" : "volume-on-close";
}

const std::vector<std::string>& default_symbols() {
    static const std::vector<std::string> symbols{"ADA", "BNB", "BTC", "DOGE", "ETH", "LINK", "LTC", "XLM", "XRP"};
    return symbols;
}

void validate(const RunConfig& config) {
    if (config.window_lengths.empty()) throw ConfigError("at least one window length is required");
    for (auto w : config.window_lengths)
        if (w < 2) throw ConfigError(fmt::format("window length must be >= 2, got {}", w));
    std::set<std::size_t> unique(config.window_lengths.begin(), config.window_lengths.end());
    if (unique.size() != config.window_lengths.size()) throw ConfigError("window lengths must be distinct");
    if (config.stride < 1) throw ConfigError("stride must be >= 1");
    if (config.ddof != 0 && config.ddof != 1) throw ConfigError(fmt::format("ddof must be 0 or 1, got {}", config.ddof));
    if (config.end_date < config.start_date) throw ConfigError("start date is after end date");
    if (config.symbols.size() < 2) throw ConfigError("at least two symbols are required");
    std::set<std::string> seen;
    for (const auto& s : config.symbols)
        if (!seen.insert(s).second) throw ConfigError(fmt::format("symbol {} listed twice", s));
    if (config.min_transform_epsilon) {
        if (!(*config.min_transform_epsilon > 0.0)) throw ConfigError("min-transform epsilon must be > 0");
        if (config.min_transform != MinTransform::reciprocal)
            throw ConfigError("min-transform epsilon only applies to the reciprocal transform");
    }
}

RunConfig load_config_file(const fs::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config file {}: {}", path.string(), e.what()));
    }
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");

    static const std::set<std::string> known{
        "data_dir",    "symbols",       "start_date",       "end_date",       "window_lengths",
        "stride",      "ddof",          "min_transform",    "min_transform_epsilon", "trend_orientation",
        "critic_scaling", "critic_constant_column", "output_dir", "format", "symbol_map"};
    try {
        for (const auto& [key, value] : doc.items()) {
            if (!known.contains(key)) throw ConfigError(fmt::format("unknown config key '{}'", key));
            if (key == "data_dir") base.data_dir = value.get<std::string>();
            else if (key == "symbols") base.symbols = value.get<std::vector<std::string>>();
            else if (key == "start_date") base.start_date = parse_date_or_throw(value.get<std::string>(), "start_date");
            else if (key == "end_date") base.end_date = parse_date_or_throw(value.get<std::string>(), "end_date");
            else if (key == "window_lengths") base.window_lengths = value.get<std::vector<std::size_t>>();
            else if (key == "stride") base.stride = value.get<std::size_t>();
            else if (key == "ddof") base.ddof = value.get<int>();
            else if (key == "min_transform") base.min_transform = parse_min_transform(value.get<std::string>());
            else if (key == "min_transform_epsilon") base.min_transform_epsilon = value.get<double>();
            else if (key == "trend_orientation")
                base.trend_orientation = parse_trend_orientation(value.get<std::string>());
            else if (key == "critic_scaling") base.critic_scaling = parse_critic_scaling(value.get<std::string>());
            else if (key == "critic_constant_column")
                base.critic_constant_column = parse_constant_column_policy(value.get<std::string>());
            else if (key == "output_dir") base.output_dir = value.get<std::string>();
            else if (key == "format") base.format = parse_output_format(value.get<std::string>());
            else if (key == "symbol_map") base.symbol_map = value.get<std::map<std::string, std::string>>();
        }
    } catch (const json::type_error& e) {
        throw ConfigError(fmt::format("config file {}: {}", path.string(), e.what()));
    }
    return base;
}

json to_json(const RunConfig& config) {
    json doc{{"data_dir", config.data_dir.string()},
             {"symbols", config.symbols},
             {"start_date", format_date(config.start_date)},
             {"end_date", format_date(config.end_date)},
             {"window_lengths", config.window_lengths},
             {"stride", config.stride},
             {"ddof", config.ddof},
             {"min_transform", to_string(config.min_transform)},
             {"trend_orientation", to_string(config.trend_orientation)},
             {"critic_scaling", to_string(config.critic_scaling)},
             {"critic_constant_column", to_string(config.critic_constant_column)},
             {"output_dir", config.output_dir.string()},
             {"format", to_string(config.format)},
             {"symbol_map", config.symbol_map}};
    doc["min_transform_epsilon"] = config.min_transform_epsilon ? json(*config.min_transform_epsilon) : json(nullptr);
    return doc;
}

std::vector<OhlcvSeries> ingest_all(const RunConfig& config) {
    const auto files = discover_files(config.data_dir, config.symbol_map);
    std::vector<OhlcvSeries> out;
    for (const auto& symbol : config.symbols) {
        auto it = files.find(symbol);
        if (it == files.end())
            throw DataError(fmt::format("[ingest] {}: no CSV file for this symbol in {}", symbol,
                                        config.data_dir.string()));
        try {
            auto series = load_csv(it->second, symbol);
            series.symbol = symbol;
            out.push_back(filter_date_range(series, config.start_date, config.end_date));
        } catch (const Error& e) {
            rethrow_with_context(e, "ingest", symbol);
        }
    }
    return out;
}

WindowReport analyze_window(std::size_t window, const DecisionMatrix& raw, const RunConfig& config,
                            Diagnostics& diagnostics) {
    const std::string subject = fmt::format("window {}", window);
    try {
        auto transformed = transform_min_to_max(raw, {config.min_transform, config.min_transform_epsilon}, &diagnostics);
        auto normalized = normalize_vector_modulus(transformed, &diagnostics);

        auto outcome = compute_all(normalized, {config.ddof, config.critic_scaling, config.critic_constant_column},
                                   &diagnostics);
        if (!outcome.complete()) {
            std::string msg;
            for (const auto& f : outcome.failures) msg += fmt::format("{}{}: {}", msg.empty() ? "" : "; ",
                                                                      to_string(f.method), f.message);
            throw DegenerateError(msg);
        }

        std::vector<TopsisResult> rankings;
        std::vector<std::string> labels;
        for (const auto& w : outcome.vectors) {
            rankings.push_back(topsis_rank(normalized, w));
            labels.emplace_back(to_string(w.method));
        }
        auto agreement = compare_rankings(rankings, labels);
        return WindowReport{window,
                            {},
                            raw,
                            std::move(transformed),
                            std::move(normalized),
                            std::move(outcome.vectors),
                            std::move(rankings),
                            std::move(agreement)};
    } catch (const Error& e) {
        rethrow_with_context(e, "analyze", subject);
    }
}

RunReport build_report(const RunConfig& config) {
    validate(config);
    RunReport report;
    report.config = config;

    const auto series = ingest_all(config);
    report.alignment = check_alignment(series);
    if (!report.alignment->aligned)
        for (const auto& [symbol, dates] : report.alignment->missing)
            if (!dates.empty())
                report.warnings.push_back(fmt::format("{} is missing {} date(s), first {}", symbol, dates.size(),
                                                      format_date(dates.front())));

    Diagnostics diagnostics;
    for (auto window : config.window_lengths) {
        std::vector<CriteriaRow> rows;
        for (const auto& s : series) {
            try {
                rows.push_back(criteria_row(s, {window, config.stride}, {config.ddof, config.trend_orientation}));
            } catch (const Error& e) {
                rethrow_with_context(e, "features", fmt::format("{} window {}", s.symbol, window));
            }
            if (rows.back().degenerate_fits > 0)
                diagnostics.warn(fmt::format("{} window {}: {} of {} trend fits degenerate", s.symbol, window,
                                             rows.back().degenerate_fits, rows.back().window_count));
        }
        DecisionMatrix raw = [&] {
            try {
                return assemble(rows);
            } catch (const Error& e) {
                rethrow_with_context(e, "assemble", fmt::format("window {}", window));
            }
        }();
        auto wr = analyze_window(window, raw, config, diagnostics);
        wr.rows = std::move(rows);
        report.windows.push_back(std::move(wr));
    }
    report.stability = window_stability(report.windows);
    report.warnings.insert(report.warnings.end(), diagnostics.warnings.begin(), diagnostics.warnings.end());
    return report;
}

RunReport build_report_from_matrices(const std::map<std::size_t, DecisionMatrix>& raw, const RunConfig& config) {
    if (raw.empty()) throw ConfigError("no matrices supplied");
    RunReport report;
    report.config = config;
    report.config.window_lengths.clear();
    Diagnostics diagnostics;
    for (const auto& [window, matrix] : raw) {
        report.config.window_lengths.push_back(window);
        report.windows.push_back(analyze_window(window, matrix, config, diagnostics));
    }
    report.stability = window_stability(report.windows);
    report.warnings = std::move(diagnostics.warnings);
    return report;
}

void write_outputs(const RunReport& report) {
    if (report.windows.empty()) throw ContractError("report has no windows");
    const auto& dir = report.config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError(fmt::format("cannot create output directory {}", dir.string()));

    const bool csv = report.config.format != OutputFormat::json;
    const bool js = report.config.format != OutputFormat::csv;

    for (const auto& w : report.windows) {
        check_unit_norm(w.normalized, w.window);
        for (const DecisionMatrix* m : {&w.raw, &w.transformed, &w.normalized}) {
            const auto stem = fmt::format("matrix_{}_{}", w.window, to_string(m->stage()));
            if (csv) {
                auto out = open_output(dir / (stem + ".csv"));
                write_matrix_csv(out, *m);
                auto meta = open_output(dir / (stem + ".meta"));
                write_matrix_meta(meta, *m);
            }
            if (js) write_json(dir / (stem + ".json"), to_json(*m));
        }
    }

    if (csv) {
        auto weights = open_output(dir / "weights.csv");
        weights << "window,method,criterion,weight,raw_score\n";
        for (const auto& w : report.windows)
            for (const auto& v : w.weights)
                for (std::size_t j = 0; j < v.weights.size(); ++j)
                    weights << w.window << ',' << to_string(v.method) << ',' << v.criteria[j] << ','
                            << format_number(v.weights[j]) << ',' << format_number(v.raw_scores[j]) << '\n';

        auto topsis = open_output(dir / "topsis.csv");
        topsis << "window,method,symbol,similarity,rank,d_ideal,d_anti\n";
        for (const auto& w : report.windows)
            for (std::size_t k = 0; k < w.rankings.size(); ++k)
                for (const auto& e : w.rankings[k].entries)
                    topsis << w.window << ',' << to_string(w.weights[k].method) << ',' << e.symbol << ','
                           << format_number(e.similarity) << ',' << e.rank << ',' << format_number(e.d_ideal) << ','
                           << format_number(e.d_anti) << '\n';
        if (!weights || !topsis) throw IoError("failed writing weights.csv / topsis.csv");
    }
    if (js) {
        json weights = json::array(), topsis = json::array();
        for (const auto& w : report.windows)
            for (std::size_t k = 0; k < w.weights.size(); ++k) {
                auto wj = weight_to_json(w.weights[k]);
                wj["window"] = w.window;
                weights.push_back(std::move(wj));
                auto tj = topsis_to_json(w.rankings[k]);
                tj["window"] = w.window;
                tj["method"] = to_string(w.weights[k].method);
                topsis.push_back(std::move(tj));
            }
        write_json(dir / "weights.json", weights);
        write_json(dir / "topsis.json", topsis);
    }

    json agreement = json::object();
    agreement["windows"] = json::array();
    for (const auto& w : report.windows) {
        auto a = to_json(w.agreement);
        a["window"] = w.window;
        agreement["windows"].push_back(std::move(a));
    }
    agreement["window_stability"] = to_json(report)["window_stability"];
    write_json(dir / "agreement.json", agreement);
    write_json(dir / "run_report.json", to_json(report));
}

void emit_plot_data(const RunReport& report) {
    if (report.windows.empty()) throw ContractError("report has no windows");
    const auto& dir = report.config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError(fmt::format("cannot create output directory {}", dir.string()));

    auto weights = open_output(dir / "plot_weights.csv");
    weights << "window,method,criterion,weight\n";
    auto similarity = open_output(dir / "plot_similarity.csv");
    similarity << "window,method,symbol,similarity\n";
    for (const auto& w : report.windows) {
        for (const auto& v : w.weights)
            for (std::size_t j = 0; j < v.weights.size(); ++j)
                weights << w.window << ',' << to_string(v.method) << ',' << v.criteria[j] << ','
                        << format_number(v.weights[j]) << '\n';
        for (std::size_t k = 0; k < w.rankings.size(); ++k)
            for (const auto& e : w.rankings[k].entries)
                similarity << w.window << ',' << to_string(w.weights[k].method) << ',' << e.symbol << ','
                           << format_number(e.similarity) << '\n';
    }
    if (!weights || !similarity) throw IoError("failed writing plot data");
}

RunReport run(const RunConfig& config) {
    auto report = build_report(config);
    write_outputs(report);
    emit_plot_data(report);
    return report;
}

json to_json(const RunReport& report) {
    json doc;
    doc["config"] = to_json(report.config);
    if (report.alignment) {
        json missing = json::object();
        for (const auto& [symbol, dates] : report.alignment->missing) {
            std::vector<std::string> text;
            for (const auto& d : dates) text.push_back(format_date(d));
            missing[symbol] = text;
        }
        doc["alignment"] = {{"aligned", report.alignment->aligned},
                            {"union_size", report.alignment->union_size},
                            {"missing", missing}};
    }
    doc["windows"] = json::array();
    for (const auto& w : report.windows) {
        json wj;
        wj["window"] = w.window;
        wj["criteria_rows"] = json::array();
        for (const auto& r : w.rows) wj["criteria_rows"].push_back(criteria_row_to_json(r));
        wj["matrices"] = {{"raw", to_json(w.raw)}, {"transformed", to_json(w.transformed)},
                          {"normalized", to_json(w.normalized)}};
        wj["weights"] = json::array();
        wj["topsis"] = json::array();
        for (std::size_t k = 0; k < w.weights.size(); ++k) {
            wj["weights"].push_back(weight_to_json(w.weights[k]));
            auto tj = topsis_to_json(w.rankings[k]);
            tj["method"] = to_string(w.weights[k].method);
            wj["topsis"].push_back(std::move(tj));
        }
        wj["agreement"] = to_json(w.agreement);
        doc["windows"].push_back(std::move(wj));
    }
    doc["window_stability"] = json::array();
    for (const auto& s : report.stability) {
        json top2 = json::object();
        for (const auto& [window, syms] : s.top2) top2[std::to_string(window)] = syms;
        doc["window_stability"].push_back({{"method", to_string(s.method)}, {"top2", top2}, {"stable", s.stable}});
    }
    doc["warnings"] = report.warnings;
    return doc;
}

}  // namespace cryptomcda
