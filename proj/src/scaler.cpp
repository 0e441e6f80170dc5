#include "volcast/scaler.hpp"

#include <algorithm>
#include <cmath>

#include "volcast/errors.hpp"

namespace volcast::pipeline {

namespace {

// Linear-interpolation quantile on a sorted copy.
double quantile(std::vector<double> sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t idx = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(idx);
    if (idx + 1 < sorted.size())
        return sorted[idx] * (1.0 - frac) + sorted[idx + 1] * frac;
    return sorted.back();
}

}  // namespace

ScalerKind scaler_kind_from_string(const std::string& name) {
    if (name == "minmax") return ScalerKind::minmax;
    if (name == "standard") return ScalerKind::standard;
    if (name == "robust") return ScalerKind::robust;
    throw config_error("unknown scaler kind '" + name + "'");
}

std::string to_string(ScalerKind kind) {
    switch (kind) {
        case ScalerKind::minmax: return "minmax";
        case ScalerKind::standard: return "standard";
        case ScalerKind::robust: return "robust";
    }
    return "?";
}

Scaler Scaler::fit(ScalerKind kind, const std::vector<std::vector<double>>& rows) {
    if (rows.size() < 2) throw data_error("scaler needs at least 2 rows to fit");
    const std::size_t n_cols = rows.front().size();
    for (const auto& row : rows)
        if (row.size() != n_cols) throw data_error("ragged rows passed to scaler fit");

    Scaler s;
    s.kind_ = kind;
    s.center_.resize(n_cols);
    s.spread_.resize(n_cols);
    const double n = static_cast<double>(rows.size());

    for (std::size_t c = 0; c < n_cols; ++c) {
        std::vector<double> col(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) col[r] = rows[r][c];
        switch (kind) {
            case ScalerKind::minmax: {
                const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
                if (*lo == *hi)
                    throw numeric_error("degenerate column " + std::to_string(c) +
                                        ": zero range under minmax scaling");
                s.center_[c] = *lo;
                s.spread_[c] = *hi;
                break;
            }
            case ScalerKind::standard: {
                double mean = 0.0;
                for (double v : col) mean += v;
                mean /= n;
                double ss = 0.0;
                for (double v : col) ss += (v - mean) * (v - mean);
                const double sd = std::sqrt(ss / (n - 1.0));
                if (sd == 0.0)
                    throw numeric_error("degenerate column " + std::to_string(c) +
                                        ": zero variance under standard scaling");
                s.center_[c] = mean;
                s.spread_[c] = sd;
                break;
            }
            case ScalerKind::robust: {
                std::sort(col.begin(), col.end());
                const double med = quantile(col, 0.5);
                const double iqr = quantile(col, 0.75) - quantile(col, 0.25);
                s.center_[c] = med;
                s.spread_[c] = iqr == 0.0 ? 1.0 : iqr;
                break;
            }
        }
    }
    return s;
}

double Scaler::transform_value(std::size_t column, double value) const {
    switch (kind_) {
        case ScalerKind::minmax: {
            const double lo = center_[column], hi = spread_[column];
            const double u = (value - lo) / (hi - lo);
            // u + eps*(1-u) hits the endpoints exactly at u = 0 and u = 1.
            return u + kMinMaxEpsilon * (1.0 - u);
        }
        case ScalerKind::standard:
        case ScalerKind::robust:
            return (value - center_[column]) / spread_[column];
    }
    return value;
}

double Scaler::inverse_value(std::size_t column, double value) const {
    switch (kind_) {
        case ScalerKind::minmax: {
            const double lo = center_[column], hi = spread_[column];
            const double u = (value - kMinMaxEpsilon) / (1.0 - kMinMaxEpsilon);
            return lo + u * (hi - lo);
        }
        case ScalerKind::standard:
        case ScalerKind::robust:
            return center_[column] + value * spread_[column];
    }
    return value;
}

std::vector<std::vector<double>> Scaler::transform(
    const std::vector<std::vector<double>>& rows) const {
    std::vector<std::vector<double>> out = rows;
    for (auto& row : out)
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = transform_value(c, row[c]);
    return out;
}

std::vector<std::vector<double>> Scaler::inverse_transform(
    const std::vector<std::vector<double>>& rows) const {
    std::vector<std::vector<double>> out = rows;
    for (auto& row : out)
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = inverse_value(c, row[c]);
    return out;
}

}  // namespace volcast::pipeline
