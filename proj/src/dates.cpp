#include "volcast/dates.hpp"

#include <array>
#include <cstdio>

#include "volcast/errors.hpp"

namespace volcast {

namespace {

bool leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m == 2 && leap_year(y)) return 29;
    return lengths[static_cast<std::size_t>(m - 1)];
}

}  // namespace

bool valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12) return false;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return false;
    return true;
}

Date parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw data_error("malformed date '" + text + "' (expected YYYY-MM-DD)");
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (text[i] < '0' || text[i] > '9')
            throw data_error("malformed date '" + text + "' (expected YYYY-MM-DD)");
    Date d;
    d.year = std::stoi(text.substr(0, 4));
    d.month = std::stoi(text.substr(5, 2));
    d.day = std::stoi(text.substr(8, 2));
    if (!valid_date(d))
        throw data_error("impossible date '" + text + "'");
    return d;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

// Howard Hinnant's civil-day algorithms.
std::int64_t to_civil_days(const Date& d) {
    const int y = d.year - (d.month <= 2 ? 1 : 0);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(d.month + (d.month > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d.day) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date from_civil_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned month = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (month <= 2 ? 1 : 0)), static_cast<int>(month),
                static_cast<int>(day)};
}

Date add_days(const Date& d, int n) {
    return from_civil_days(to_civil_days(d) + n);
}

std::int64_t days_between(const Date& from, const Date& to) {
    return to_civil_days(to) - to_civil_days(from);
}

}  // namespace volcast
