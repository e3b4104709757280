#include "cryptomcda/date.hpp"

#include "cryptomcda/error.hpp"

#include <charconv>
#include <fmt/format.h>

namespace cryptomcda {

namespace {

std::optional<int> parse_digits(std::string_view text) {
    if (text.empty()) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    // strip surrounding whitespace and the time-of-day suffix
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    if (auto cut = text.find_first_of(" T"); cut != std::string_view::npos) text = text.substr(0, cut);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;

    auto y = parse_digits(text.substr(0, 4));
    auto m = parse_digits(text.substr(5, 2));
    auto d = parse_digits(text.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;

    Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
              std::chrono::day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

Date parse_date_or_throw(std::string_view text, std::string_view what) {
    auto date = parse_date(text);
    if (!date) throw ConfigError(fmt::format("invalid {} '{}', expected YYYY-MM-DD", what, text));
    return *date;
}

std::string format_date(const Date& date) {
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                       static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

}  // namespace cryptomcda
