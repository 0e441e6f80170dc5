#pragma once

#include <cstddef>
#include <vector>

#include "volcast/dates.hpp"

namespace volcast {

// Dated close prices. Dates strictly increasing, all closes positive.
struct PriceSeries {
    std::vector<Date> dates;
    std::vector<double> closes;

    std::size_t size() const { return dates.size(); }
};

// Dated log returns; the first price date is dropped.
struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> returns;

    std::size_t size() const { return dates.size(); }
};

// Trailing-window sample standard deviation of log returns, per-day units.
struct VolSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    int window = 0;

    std::size_t size() const { return dates.size(); }
};

struct DescriptiveStats {
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;  // N-1 denominator
    double min = 0.0;
    double max = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

}  // namespace volcast
