#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace volcast {

// Calendar date. Text form is ISO-8601 YYYY-MM-DD throughout.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;
};

bool valid_date(const Date& d);

// Throws data_error on malformed or impossible dates.
Date parse_date(const std::string& text);

std::string format_date(const Date& d);

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t to_civil_days(const Date& d);
Date from_civil_days(std::int64_t z);

Date add_days(const Date& d, int n);
std::int64_t days_between(const Date& from, const Date& to);

}  // namespace volcast
