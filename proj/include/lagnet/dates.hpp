#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace lagnet {

using Date = std::chrono::year_month_day;

/// ISO week identifier. The week-based year can differ from the calendar
/// year near January 1st; weeks start on Monday and week 1 holds the year's
/// first Thursday.
struct IsoWeek {
    int year = 0;
    int week = 0; // 1..53

    auto operator<=>(const IsoWeek&) const = default;
};

/// Parses a strict ISO-8601 calendar date ("YYYY-MM-DD").
/// Throws ValidationError on malformed or non-existent dates.
Date parse_date(std::string_view text);

/// Formats as "YYYY-MM-DD".
std::string format_date(const Date& date);

/// ISO week containing `date`.
IsoWeek iso_week(const Date& date);

/// Monday of the ISO week containing `date`.
Date iso_week_start(const Date& date);

/// True for Monday through Friday.
bool is_weekday(const Date& date);

/// Next date after `date` that is a weekday.
Date next_weekday(const Date& date);

} // namespace lagnet
