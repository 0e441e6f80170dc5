#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "volcast/series.hpp"

namespace volcast::backtest {

struct FuturesRow {
    Date trade_date;
    std::string symbol;
    double close = 0.0;
    int days_to_expiry = 0;
};

struct Settlement {
    Date expiration;
    double price = 0.0;
};

struct FuturesSeries {
    std::vector<FuturesRow> rows;  // sorted by trade date
    std::map<std::string, Settlement> settlements;
};

// futures CSV: trade_date,symbol,close; settlements CSV:
// symbol,expiration_date,settlement_price. Validates positive prices, a
// settlement entry for every traded symbol, and non-negative days to expiry.
FuturesSeries load_futures(const std::string& futures_csv,
                           const std::string& settlements_csv);

struct SignalSeries {
    std::vector<Date> dates;
    std::vector<int> signals;  // +1 long, -1 short
};

// Long when the next day's forecast exceeds today's actual volatility,
// short when below. `forecast_next` is already shifted: its value at date t
// is the prediction for t+1. Ties hold the previous signal (-1 on the first
// day). Both series must be on identical dates.
SignalSeries make_signals(const VolSeries& forecast_next, const VolSeries& actual);

struct LedgerRow {
    Date date;
    int position = 0;
    std::string symbol;
    double entry_price = 0.0;     // reference price the day's return is measured from
    double exit_price = 0.0;      // close, or settlement on expiration day
    double pre_cost_return = 0.0; // signed daily contract return before costs
    double cost_paid = 0.0;       // currency units booked this day
    int cost_legs = 0;            // entry/exit events booked this day
    bool rolled = false;
    bool flipped = false;
    double daily_return = 0.0;    // equity-level return after costs
    double equity = 0.0;
};

struct TradeLedger {
    std::vector<LedgerRow> rows;
    double initial_capital = 0.0;
    double allocation = 0.0;
    double cost_rate = 0.0;
    bool bankrupt = false;
};

// Daily simulation: positions follow the signals; an unchanged signal holds,
// a change closes and reopens (cost at both legs); on a contract's
// expiration date the position exits at the official settlement price and
// reopens the same day at the next contract's close. Daily returns are
// scaled by `allocation` (rebalanced daily); each cost leg charges
// cost_rate * allocation * equity.
TradeLedger simulate(const FuturesSeries& futures, const SignalSeries& signals,
                     double initial_capital = 1000.0, double allocation = 0.25,
                     double cost_rate = 0.001);

enum class BenchmarkKind { long_only, short_only };

// A constant-signal run of `simulate` over the given dates.
TradeLedger run_benchmark(BenchmarkKind kind, const FuturesSeries& futures,
                          const std::vector<Date>& dates,
                          double initial_capital = 1000.0, double allocation = 0.25,
                          double cost_rate = 0.001);

struct StrategyStats {
    double arc_percent = 0.0;           // annualized compound return
    double asd_percent = 0.0;           // annualized stddev of daily returns
    double max_drawdown_percent = 0.0;  // <= 0
    double total_return_percent = 0.0;
    std::optional<double> sharpe;  // ARC/ASD, undefined when ASD = 0
    std::optional<double> calmar;  // ARC/|maxDD|, undefined when maxDD = 0
};

// 252-day year; the equity path starts at the initial capital.
StrategyStats strategy_stats(const TradeLedger& ledger);

void write_signals_csv(const std::string& path, const SignalSeries& signals);
void write_ledger_csv(const std::string& path, const TradeLedger& ledger);
std::string stats_to_json(const StrategyStats& stats);

}  // namespace volcast::backtest
