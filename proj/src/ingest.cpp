#include "cryptomcda/ingest.hpp"

#include "cryptomcda/error.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <cctype>

namespace cryptomcda {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

std::optional<double> parse_number(const std::string& text) {
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const char* first = text.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

struct Columns {
    std::optional<std::size_t> name, symbol, date, high, low, open, close, volume, market_cap;
};

Columns locate_columns(const std::vector<std::string>& header) {
    Columns cols;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string h = trim(header[i]);
        if (i == 0 && h.starts_with("\xEF\xBB\xBF")) h.erase(0, 3);  // UTF-8 BOM
        if (h == "Name") cols.name = i;
        else if (h == "Symbol") cols.symbol = i;
        else if (h == "Date") cols.date = i;
        else if (h == "High") cols.high = i;
        else if (h == "Low") cols.low = i;
        else if (h == "Open") cols.open = i;
        else if (h == "Close") cols.close = i;
        else if (h == "Volume") cols.volume = i;
        else if (h == "Marketcap") cols.market_cap = i;
    }
    if (!cols.date) throw SchemaError("Date");
    if (!cols.close) throw SchemaError("Close");
    if (!cols.volume) throw SchemaError("Volume");
    return cols;
}

std::string field_at(const std::vector<std::string>& fields, std::optional<std::size_t> col) {
    if (!col || *col >= fields.size()) return {};
    return trim(fields[*col]);
}

void validate_record(const OhlcvRecord& r, std::size_t row) {
    if (!(r.close > 0.0)) throw ValidationError(fmt::format("row {}: close must be > 0, got {}", row, r.close));
    if (!(r.volume >= 0.0)) throw ValidationError(fmt::format("row {}: volume must be >= 0, got {}", row, r.volume));
    if (r.open && r.high && r.low) {
        const double hi = std::max(*r.open, r.close);
        const double lo = std::min(*r.open, r.close);
        if (*r.high < hi || *r.low > lo)
            throw ValidationError(fmt::format("row {}: high/low inconsistent with open/close", row));
    }
}

std::string fmt_price(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

OhlcvSeries parse_csv(std::istream& in, const std::string& symbol) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("Date");
    const Columns cols = locate_columns(split_csv_line(line));

    OhlcvSeries series;
    series.symbol = symbol;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_csv_line(line);

        OhlcvRecord rec;
        const std::string date_text = field_at(fields, cols.date);
        auto date = parse_date(date_text);
        if (!date) throw RowError(row, fmt::format("unparseable Date '{}'", date_text));
        rec.date = *date;

        const std::string close_text = field_at(fields, cols.close);
        auto close = parse_number(close_text);
        if (!close) throw RowError(row, fmt::format("unparseable Close '{}'", close_text));
        rec.close = *close;

        const std::string volume_text = field_at(fields, cols.volume);
        auto volume = parse_number(volume_text);
        if (!volume) throw RowError(row, fmt::format("unparseable Volume '{}'", volume_text));
        rec.volume = *volume;

        rec.open = parse_number(field_at(fields, cols.open));
        rec.high = parse_number(field_at(fields, cols.high));
        rec.low = parse_number(field_at(fields, cols.low));
        rec.market_cap = parse_number(field_at(fields, cols.market_cap));
        validate_record(rec, row);

        if (row == 1) {
            if (auto s = field_at(fields, cols.symbol); !s.empty()) series.symbol = s;
            series.name = field_at(fields, cols.name);
        }
        series.records.push_back(rec);
    }

    std::stable_sort(series.records.begin(), series.records.end(),
                     [](const OhlcvRecord& a, const OhlcvRecord& b) { return a.date < b.date; });
    auto dup = std::adjacent_find(series.records.begin(), series.records.end(),
                                  [](const OhlcvRecord& a, const OhlcvRecord& b) { return a.date == b.date; });
    if (dup != series.records.end())
        throw ValidationError(fmt::format("{}: duplicate date {}", series.symbol, format_date(dup->date)));
    return series;
}

OhlcvSeries load_csv(const std::filesystem::path& path, const std::string& symbol) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
    return parse_csv(in, symbol);
}

void write_csv(std::ostream& out, const OhlcvSeries& series) {
    auto opt = [](const std::optional<double>& v) { return v ? fmt_price(*v) : std::string{}; };
    out << "SNo,Name,Symbol,Date,High,Low,Open,Close,Volume,Marketcap\n";
    std::size_t sno = 1;
    for (const auto& r : series.records) {
        out << sno++ << ',' << series.name << ',' << series.symbol << ',' << format_date(r.date) << " 23:59:59,"
            << opt(r.high) << ',' << opt(r.low) << ',' << opt(r.open) << ',' << fmt_price(r.close) << ','
            << fmt_price(r.volume) << ',' << opt(r.market_cap) << '\n';
    }
}

OhlcvSeries filter_date_range(const OhlcvSeries& series, const Date& start, const Date& end) {
    if (end < start)
        throw ContractError(fmt::format("date range start {} is after end {}", format_date(start), format_date(end)));
    OhlcvSeries out{series.symbol, series.name, {}};
    std::copy_if(series.records.begin(), series.records.end(), std::back_inserter(out.records),
                 [&](const OhlcvRecord& r) { return start <= r.date && r.date <= end; });
    if (out.records.empty())
        throw EmptyRangeError(fmt::format("{}: no records between {} and {}", series.symbol, format_date(start),
                                          format_date(end)));
    return out;
}

AlignmentReport check_alignment(std::span<const OhlcvSeries> series_set) {
    if (series_set.empty()) throw ContractError("check_alignment needs at least one series");
    std::set<Date> all;
    for (const auto& s : series_set)
        for (const auto& r : s.records) all.insert(r.date);

    AlignmentReport report;
    report.union_size = all.size();
    for (const auto& s : series_set) {
        std::vector<Date> have;
        have.reserve(s.size());
        for (const auto& r : s.records) have.push_back(r.date);
        std::vector<Date> missing;
        std::set_difference(all.begin(), all.end(), have.begin(), have.end(), std::back_inserter(missing));
        if (!missing.empty()) report.aligned = false;
        report.missing[s.symbol] = std::move(missing);
    }
    return report;
}

std::map<std::string, std::filesystem::path> discover_files(
    const std::filesystem::path& dir, const std::map<std::string, std::string>& name_to_symbol) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw DataError(fmt::format("data directory {} does not exist", dir.string()));

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::map<std::string, fs::path> found;
    for (const auto& path : files) {
        std::string stem = path.stem().string();
        if (stem.starts_with("coin_")) stem.erase(0, 5);
        std::string symbol = stem;
        if (auto it = name_to_symbol.find(stem); it != name_to_symbol.end()) symbol = it->second;

        std::ifstream in(path);
        std::string header, first;
        if (std::getline(in, header) && std::getline(in, first)) {
            const auto cols = split_csv_line(header);
            const auto fields = split_csv_line(first);
            for (std::size_t i = 0; i < cols.size() && i < fields.size(); ++i)
                if (trim(cols[i]) == "Symbol" && !trim(fields[i]).empty()) symbol = trim(fields[i]);
        }
        found.emplace(symbol, path);
    }
    return found;
}

}  // namespace cryptomcda
