#include "volcast/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "volcast/csv.hpp"
#include "volcast/errors.hpp"

namespace volcast::backtest {

FuturesSeries load_futures(const std::string& futures_csv,
                           const std::string& settlements_csv) {
    FuturesSeries series;

    const CsvTable settle_table = read_csv(settlements_csv);
    const std::size_t sym_col = column_index(settle_table, "symbol");
    const std::size_t exp_col = column_index(settle_table, "expiration_date");
    const std::size_t price_col = column_index(settle_table, "settlement_price");
    for (std::size_t i = 0; i < settle_table.rows.size(); ++i) {
        const auto& row = settle_table.rows[i];
        const std::size_t line = settle_table.line_numbers[i];
        Settlement s;
        s.expiration = parse_date(row[exp_col]);
        s.price = parse_double(row[price_col], "settlement price", line);
        if (!(s.price > 0.0))
            throw data_error("non-positive settlement price at line " +
                             std::to_string(line));
        if (!series.settlements.emplace(row[sym_col], s).second)
            throw data_error("duplicate settlement for symbol " + row[sym_col]);
    }

    const CsvTable table = read_csv(futures_csv);
    const std::size_t date_col = column_index(table, "trade_date");
    const std::size_t fsym_col = column_index(table, "symbol");
    const std::size_t close_col = column_index(table, "close");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        FuturesRow r;
        r.trade_date = parse_date(row[date_col]);
        r.symbol = row[fsym_col];
        r.close = parse_double(row[close_col], "close price", line);
        if (!(r.close > 0.0))
            throw data_error("non-positive close price at line " + std::to_string(line));
        const auto it = series.settlements.find(r.symbol);
        if (it == series.settlements.end())
            throw data_error("traded symbol " + r.symbol + " has no settlement record");
        const auto dte = days_between(r.trade_date, it->second.expiration);
        if (dte < 0)
            throw data_error("trade after expiration for " + r.symbol + " at line " +
                             std::to_string(line));
        r.days_to_expiry = static_cast<int>(dte);
        series.rows.push_back(std::move(r));
    }
    std::stable_sort(series.rows.begin(), series.rows.end(),
                     [](const FuturesRow& a, const FuturesRow& b) {
                         return a.trade_date < b.trade_date;
                     });
    return series;
}

SignalSeries make_signals(const VolSeries& forecast_next, const VolSeries& actual) {
    if (forecast_next.dates != actual.dates)
        throw data_error("make_signals: misaligned forecast and actual series");
    if (forecast_next.dates.empty()) throw data_error("make_signals: empty series");
    SignalSeries out;
    out.dates = actual.dates;
    out.signals.resize(actual.size());
    int prev = -1;  // tie on the first day defaults to short
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double f = forecast_next.values[i];
        const double a = actual.values[i];
        out.signals[i] = f > a ? 1 : f < a ? -1 : prev;
        prev = out.signals[i];
    }
    return out;
}

namespace {

struct PriceBook {
    std::map<Date, std::map<std::string, double>> closes;
    const FuturesSeries* futures = nullptr;

    double close_or_throw(const Date& date, const std::string& symbol) const {
        const auto day = closes.find(date);
        if (day != closes.end()) {
            const auto it = day->second.find(symbol);
            if (it != day->second.end()) return it->second;
        }
        throw data_error("missing price for " + symbol + " on " + format_date(date));
    }
};

// Nearest contract whose expiration is strictly after `date`.
std::string next_contract(const FuturesSeries& futures, const Date& date) {
    std::string best;
    Date best_exp;
    for (const auto& [symbol, settlement] : futures.settlements) {
        if (settlement.expiration <= date) continue;
        if (best.empty() || settlement.expiration < best_exp) {
            best = symbol;
            best_exp = settlement.expiration;
        }
    }
    if (best.empty())
        throw data_error("no unexpired contract available on " + format_date(date));
    return best;
}

}  // namespace

TradeLedger simulate(const FuturesSeries& futures, const SignalSeries& signals,
                     double initial_capital, double allocation, double cost_rate) {
    if (signals.dates.empty()) throw data_error("simulate: empty signal series");

    PriceBook book;
    book.futures = &futures;
    for (const auto& row : futures.rows)
        book.closes[row.trade_date][row.symbol] = row.close;

    TradeLedger ledger;
    ledger.initial_capital = initial_capital;
    ledger.allocation = allocation;
    ledger.cost_rate = cost_rate;
    ledger.rows.reserve(signals.dates.size());

    double equity = initial_capital;
    int position = 0;
    std::string contract;
    double ref_price = 0.0;

    for (std::size_t i = 0; i < signals.dates.size(); ++i) {
        const Date date = signals.dates[i];
        LedgerRow row;
        row.date = date;

        if (i == 0) {
            contract = next_contract(futures, date);
            ref_price = book.close_or_throw(date, contract);
            position = signals.signals[0];
            row.cost_legs = 1;  // opening entry
            row.position = position;
            row.symbol = contract;
            row.entry_price = ref_price;
            row.exit_price = ref_price;
        } else {
            const Settlement& settlement = futures.settlements.at(contract);
            const bool expires_today = settlement.expiration == date;
            const double exit_value = expires_today
                                          ? settlement.price
                                          : book.close_or_throw(date, contract);
            row.entry_price = ref_price;
            row.exit_price = exit_value;
            row.pre_cost_return = position * (exit_value / ref_price - 1.0);

            if (expires_today) {
                row.rolled = true;
                contract = next_contract(futures, date);
                ref_price = book.close_or_throw(date, contract);
            } else {
                ref_price = exit_value;
            }
            if (signals.signals[i] != position) {
                row.flipped = true;
                position = signals.signals[i];
                if (!row.rolled) ref_price = exit_value;
            }
            // A roll or flip closes and reopens: one exit leg, one entry leg.
            row.cost_legs = (row.rolled || row.flipped) ? 2 : 0;
            row.position = position;
            row.symbol = contract;
        }

        const double equity_pre =
            i == 0 ? equity : equity * (1.0 + allocation * row.pre_cost_return);
        row.cost_paid = row.cost_legs * cost_rate * allocation * equity_pre;
        const double new_equity = equity_pre - row.cost_paid;
        row.daily_return = new_equity / equity - 1.0;
        row.equity = new_equity;
        equity = new_equity;
        ledger.rows.push_back(std::move(row));

        if (equity <= 0.0) {
            ledger.bankrupt = true;
            break;
        }
    }
    return ledger;
}

TradeLedger run_benchmark(BenchmarkKind kind, const FuturesSeries& futures,
                          const std::vector<Date>& dates, double initial_capital,
                          double allocation, double cost_rate) {
    SignalSeries constant;
    constant.dates = dates;
    constant.signals.assign(dates.size(), kind == BenchmarkKind::long_only ? 1 : -1);
    return simulate(futures, constant, initial_capital, allocation, cost_rate);
}

StrategyStats strategy_stats(const TradeLedger& ledger) {
    if (ledger.rows.size() < 1 || ledger.initial_capital <= 0.0)
        throw data_error("strategy_stats: need at least 2 equity points");

    std::vector<double> equity;
    equity.reserve(ledger.rows.size() + 1);
    equity.push_back(ledger.initial_capital);
    for (const auto& row : ledger.rows) equity.push_back(row.equity);

    StrategyStats stats;
    const double n_days = static_cast<double>(ledger.rows.size());
    const double growth = equity.back() / equity.front();
    stats.total_return_percent = (growth - 1.0) * 100.0;
    const double arc = std::pow(growth, 252.0 / n_days) - 1.0;
    stats.arc_percent = arc * 100.0;

    double mean = 0.0;
    for (const auto& row : ledger.rows) mean += row.daily_return;
    mean /= n_days;
    double ss = 0.0;
    for (const auto& row : ledger.rows) {
        const double d = row.daily_return - mean;
        ss += d * d;
    }
    const double asd =
        n_days > 1 ? std::sqrt(ss / (n_days - 1.0)) * std::sqrt(252.0) : 0.0;
    stats.asd_percent = asd * 100.0;

    double peak = equity.front();
    double max_dd = 0.0;
    for (double e : equity) {
        peak = std::max(peak, e);
        max_dd = std::min(max_dd, e / peak - 1.0);
    }
    stats.max_drawdown_percent = max_dd * 100.0;

    if (asd > 0.0) stats.sharpe = arc / asd;
    if (max_dd < 0.0) stats.calmar = arc / std::abs(max_dd);
    return stats;
}

void write_signals_csv(const std::string& path, const SignalSeries& signals) {
    std::ostringstream out;
    out << "date,signal\n";
    for (std::size_t i = 0; i < signals.dates.size(); ++i)
        out << format_date(signals.dates[i]) << ',' << signals.signals[i] << '\n';
    write_text_file(path, out.str());
}

void write_ledger_csv(const std::string& path, const TradeLedger& ledger) {
    std::ostringstream out;
    out << "date,position,symbol,entry_price,exit_price,pre_cost_return,cost_paid,"
           "cost_legs,rolled,flipped,daily_return,equity\n";
    for (const auto& r : ledger.rows)
        out << format_date(r.date) << ',' << r.position << ',' << r.symbol << ','
            << format_double(r.entry_price) << ',' << format_double(r.exit_price) << ','
            << format_double(r.pre_cost_return) << ',' << format_double(r.cost_paid)
            << ',' << r.cost_legs << ',' << (r.rolled ? 1 : 0) << ','
            << (r.flipped ? 1 : 0) << ',' << format_double(r.daily_return) << ','
            << format_double(r.equity) << '\n';
    write_text_file(path, out.str());
}

std::string stats_to_json(const StrategyStats& stats) {
    nlohmann::json j;
    j["sharpe_ratio"] = stats.sharpe ? nlohmann::json(*stats.sharpe)
                                     : nlohmann::json(nullptr);
    j["calmar_ratio"] = stats.calmar ? nlohmann::json(*stats.calmar)
                                     : nlohmann::json(nullptr);
    j["annualized_return_percent"] = stats.arc_percent;
    j["annualized_std_dev_percent"] = stats.asd_percent;
    j["max_drawdown_percent"] = stats.max_drawdown_percent;
    j["total_return_percent"] = stats.total_return_percent;
    return j.dump(2) + "\n";
}

}  // namespace volcast::backtest
