#include "volcast/features.hpp"

#include <algorithm>
#include <map>

#include "volcast/errors.hpp"

namespace volcast::pipeline {

std::vector<double> FeatureMatrix::row(std::size_t r) const {
    std::vector<double> out(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) out[c] = columns[c][r];
    return out;
}

FeatureMatrix assemble_features(const ReturnSeries& returns, const VolSeries& vol,
                                const std::vector<sv::SvForecast>* sv_forecasts) {
    std::map<Date, double> vol_by_date;
    for (std::size_t i = 0; i < vol.size(); ++i)
        vol_by_date[vol.dates[i]] = vol.values[i];

    std::map<Date, double> sv_by_date;
    if (sv_forecasts)
        for (const auto& f : *sv_forecasts) sv_by_date[f.date] = f.median_vol;

    FeatureMatrix m;
    m.column_names = {"log_return", "rolling_vol"};
    if (sv_forecasts) m.column_names.push_back("sv_forecast");
    m.columns.resize(m.column_names.size());
    m.vol_column = 1;

    for (std::size_t i = 0; i < returns.size(); ++i) {
        const Date date = returns.dates[i];
        const auto vol_it = vol_by_date.find(date);
        if (vol_it == vol_by_date.end()) continue;
        double sv_value = 0.0;
        if (sv_forecasts) {
            if (i + 1 >= returns.size()) continue;  // no t+1 forecast to pair
            const auto sv_it = sv_by_date.find(returns.dates[i + 1]);
            if (sv_it == sv_by_date.end()) continue;
            sv_value = sv_it->second;
        }
        m.dates.push_back(date);
        m.columns[0].push_back(returns.returns[i]);
        m.columns[1].push_back(vol_it->second);
        if (sv_forecasts) m.columns[2].push_back(sv_value);
    }
    if (m.dates.empty())
        throw data_error("assemble_features: empty intersection of date ranges");
    return m;
}

FeatureMatrix assemble_hybrid_features(const ReturnSeries& returns,
                                       const VolSeries& vol,
                                       const std::vector<sv::SvForecast>& sv_forecasts) {
    return assemble_features(returns, vol, &sv_forecasts);
}

SequenceSet make_sequences(const FeatureMatrix& features, int lookback,
                           std::size_t row_begin, std::size_t row_end) {
    if (lookback < 1) throw data_error("make_sequences: lookback must be >= 1");
    if (row_end > features.rows() || row_begin > row_end)
        throw data_error("make_sequences: row range out of bounds");
    const std::size_t n_rows = row_end - row_begin;
    if (n_rows < static_cast<std::size_t>(lookback) + 1)
        throw data_error("make_sequences: need at least lookback+1 rows");

    const std::size_t lb = static_cast<std::size_t>(lookback);
    const std::size_t count = n_rows - lb;
    const std::size_t n_feat = features.n_features();

    SequenceSet out;
    out.data.inputs.reserve(count);
    out.data.targets.reserve(count);
    out.target_dates.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        nn::Mat seq(lb, n_feat);
        for (std::size_t t = 0; t < lb; ++t)
            for (std::size_t c = 0; c < n_feat; ++c)
                seq(t, c) = features.columns[c][row_begin + k + t];
        out.data.inputs.push_back(std::move(seq));
        const std::size_t target_row = row_begin + k + lb;
        out.data.targets.push_back(features.columns[features.vol_column][target_row]);
        out.target_dates.push_back(features.dates[target_row]);
    }
    return out;
}

}  // namespace volcast::pipeline
