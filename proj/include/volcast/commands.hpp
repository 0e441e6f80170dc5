#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "volcast/market_data.hpp"

namespace volcast::cli {

struct DataOptions {
    std::string input_path;
    std::string out_dir = ".";
    int vol_window = 21;
    market::PriceCsvFormat format;
};

// Writes returns.csv, volatility.csv, stats.json, manifest.json.
void cmd_data(const DataOptions& options);

struct ForecastOptions {
    std::string config_path;
    std::optional<std::string> out_dir;  // flag wins over config
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    std::optional<int> trials;
    std::optional<int> executions;
};

// Runs the configured experiment; writes forecasts.csv, sv_forecasts.csv,
// per-window reports, and manifest.json into the run directory.
void cmd_forecast(const ForecastOptions& options);

struct CompareOptions {
    std::vector<std::string> forecast_files;  // >= 2, aligned by date
    std::vector<std::string> names;           // optional, defaults to file stems
    std::string out_path = "comparison.json";
};

// Point metrics per model plus pairwise Wilcoxon and Diebold-Mariano tests.
void cmd_compare(const CompareOptions& options);

struct BacktestOptions {
    std::string forecasts_path;
    std::string futures_path;
    std::string settlements_path;
    std::string out_dir = ".";
    double initial_capital = 1000.0;
    double allocation = 0.25;
    double cost_rate = 0.001;
    bool benchmarks = false;
};

// Signals from the forecast file, the trade simulation, strategy stats, and
// optionally the constant long/short benchmark ledgers.
void cmd_backtest(const BacktestOptions& options);

}  // namespace volcast::cli
