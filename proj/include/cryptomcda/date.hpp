#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace cryptomcda {

using Date = std::chrono::year_month_day;

/// Parses "YYYY-MM-DD", ignoring any time-of-day suffix ("2021-07-06 23:59:59",
/// "2021-07-06T00:00:00"). Returns nullopt for malformed or impossible dates.
std::optional<Date> parse_date(std::string_view text);

/// Like parse_date but throws ConfigError naming `what`.
Date parse_date_or_throw(std::string_view text, std::string_view what);

std::string format_date(const Date& date);

}  // namespace cryptomcda
