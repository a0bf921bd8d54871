#include "lagnet/dates.hpp"

#include "lagnet/errors.hpp"

#include <cctype>
#include <charconv>

namespace lagnet {

namespace {

int parse_int_field(std::string_view text, std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw ValidationError("invalid date '" + std::string(text) + "': expected YYYY-MM-DD");
    }
    return value;
}

} // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ValidationError("invalid date '" + std::string(text) + "': expected YYYY-MM-DD");
    }
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            throw ValidationError("invalid date '" + std::string(text) + "': expected YYYY-MM-DD");
        }
    }
    const int y = parse_int_field(text, 0, 4);
    const int m = parse_int_field(text, 5, 2);
    const int d = parse_int_field(text, 8, 2);
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        throw ValidationError("invalid date '" + std::string(text) + "': no such calendar day");
    }
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

IsoWeek iso_week(const Date& date) {
    using namespace std::chrono;
    const sys_days day{date};
    const auto iso_dow = weekday{day}.iso_encoding(); // Mon=1 .. Sun=7
    // The ISO year and week are those of the Thursday in this date's week.
    const sys_days thursday = day + days{4 - static_cast<int>(iso_dow)};
    const year_month_day thu_ymd{thursday};
    const sys_days year_start{thu_ymd.year() / January / 1};
    const auto day_of_year = (thursday - year_start).count() + 1;
    return IsoWeek{static_cast<int>(thu_ymd.year()), static_cast<int>((day_of_year - 1) / 7 + 1)};
}

Date iso_week_start(const Date& date) {
    using namespace std::chrono;
    const sys_days day{date};
    const auto iso_dow = weekday{day}.iso_encoding();
    return year_month_day{day - days{static_cast<int>(iso_dow) - 1}};
}

bool is_weekday(const Date& date) {
    const std::chrono::weekday wd{std::chrono::sys_days{date}};
    return wd.iso_encoding() <= 5;
}

Date next_weekday(const Date& date) {
    using namespace std::chrono;
    sys_days day{date};
    do {
        day += days{1};
    } while (!is_weekday(year_month_day{day}));
    return year_month_day{day};
}

} // namespace lagnet
