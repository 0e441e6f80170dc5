#pragma once

#include <string>
#include <vector>

#include "volcast/series.hpp"

namespace volcast::market {

struct PriceCsvFormat {
    std::string date_column = "date";
    std::string close_column = "close";
};

// Loads dated closes from a headered CSV, sorts rows by date, and rejects
// duplicate dates, non-positive prices, and malformed rows (with the source
// line number in the message).
PriceSeries load_prices(const std::string& path, const PriceCsvFormat& format = {});

// returns[i] = ln(closes[i+1] / closes[i]); requires at least two prices.
ReturnSeries log_returns(const PriceSeries& prices);

// Trailing sample standard deviation (N-1) over `window` returns; the value
// at output index t covers the window ending at t. Requires window >= 2 and
// at least `window` returns.
VolSeries rolling_volatility(const ReturnSeries& returns, int window);

// Moment summary with N-1 variance; skewness and excess kurtosis are the
// standardized third/fourth central moments. A constant series has no
// defined shape moments and raises numeric_error.
DescriptiveStats describe(const std::vector<double>& values);

void write_series_csv(const std::string& path, const std::vector<Date>& dates,
                      const std::vector<double>& values);

std::string stats_to_json(const DescriptiveStats& close_stats,
                          const DescriptiveStats& return_stats);

}  // namespace volcast::market
