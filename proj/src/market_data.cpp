#include "volcast/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "volcast/csv.hpp"
#include "volcast/errors.hpp"

namespace volcast::market {

PriceSeries load_prices(const std::string& path, const PriceCsvFormat& format) {
    const CsvTable table = read_csv(path);
    const std::size_t date_col = column_index(table, format.date_column);
    const std::size_t close_col = column_index(table, format.close_column);

    struct Row {
        Date date;
        double close;
        std::size_t line;
    };
    std::vector<Row> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& fields = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        if (fields.size() <= std::max(date_col, close_col))
            throw data_error("malformed row at line " + std::to_string(line) +
                             ": too few columns");
        Date date;
        try {
            date = parse_date(fields[date_col]);
        } catch (const data_error& e) {
            throw data_error(std::string(e.what()) + " at line " + std::to_string(line));
        }
        const double close = parse_double(fields[close_col], "price", line);
        if (!(close > 0.0))
            throw data_error("non-positive price " + fields[close_col] + " at line " +
                             std::to_string(line));
        rows.push_back({date, close, line});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    PriceSeries out;
    out.dates.reserve(rows.size());
    out.closes.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].date == rows[i - 1].date)
            throw data_error("duplicate date " + format_date(rows[i].date) + " at line " +
                             std::to_string(rows[i].line));
        out.dates.push_back(rows[i].date);
        out.closes.push_back(rows[i].close);
    }
    return out;
}

ReturnSeries log_returns(const PriceSeries& prices) {
    if (prices.size() < 2)
        throw data_error("need at least 2 prices to compute returns");
    ReturnSeries out;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    out.returns.resize(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i)
        out.returns[i] = std::log(prices.closes[i + 1] / prices.closes[i]);
    return out;
}

VolSeries rolling_volatility(const ReturnSeries& returns, int window) {
    if (window < 2) throw data_error("volatility window must be at least 2");
    if (returns.size() < static_cast<std::size_t>(window))
        throw data_error("return series shorter than volatility window");
    const std::size_t n = returns.size() - static_cast<std::size_t>(window) + 1;
    VolSeries out;
    out.window = window;
    out.dates.resize(n);
    out.values.resize(n);
    const std::size_t w = static_cast<std::size_t>(window);
    for (std::size_t j = 0; j < n; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < w; ++i) mean += returns.returns[j + i];
        mean /= static_cast<double>(w);
        double ss = 0.0;
        for (std::size_t i = 0; i < w; ++i) {
            const double d = returns.returns[j + i] - mean;
            ss += d * d;
        }
        out.values[j] = std::sqrt(ss / static_cast<double>(w - 1));
        out.dates[j] = returns.dates[j + w - 1];
    }
    return out;
}

DescriptiveStats describe(const std::vector<double>& values) {
    if (values.size() < 2) throw data_error("need at least 2 values to describe");
    const double n = static_cast<double>(values.size());
    DescriptiveStats s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 == 1 ? sorted[mid]
                                      : 0.5 * (sorted[mid - 1] + sorted[mid]);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.std_dev = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 == 0.0)
        throw numeric_error("constant series: skewness and kurtosis are undefined");
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return s;
}

void write_series_csv(const std::string& path, const std::vector<Date>& dates,
                      const std::vector<double>& values) {
    std::ostringstream out;
    out << "date,value\n";
    for (std::size_t i = 0; i < dates.size(); ++i)
        out << format_date(dates[i]) << ',' << format_double(values[i]) << '\n';
    write_text_file(path, out.str());
}

namespace {

nlohmann::json stats_json(const DescriptiveStats& s) {
    return nlohmann::json{{"mean", s.mean},
                          {"median", s.median},
                          {"std_dev", s.std_dev},
                          {"min", s.min},
                          {"max", s.max},
                          {"skewness", s.skewness},
                          {"excess_kurtosis", s.excess_kurtosis}};
}

}  // namespace

std::string stats_to_json(const DescriptiveStats& close_stats,
                          const DescriptiveStats& return_stats) {
    nlohmann::json j{{"close", stats_json(close_stats)},
                     {"log_return", stats_json(return_stats)}};
    return j.dump(2) + "\n";
}

}  // namespace volcast::market
