#pragma once

#include <optional>
#include <string>
#include <vector>

#include "volcast/series.hpp"
#include "volcast/sv_model.hpp"
#include "volcast/training.hpp"

namespace volcast::pipeline {

// Row-aligned model inputs. Row t carries information available at date t;
// the regression target for a sequence ending at row t is the rolling
// volatility at row t+1 (read off the rolling_vol column, never beyond the
// rows a caller passes in).
struct FeatureMatrix {
    std::vector<Date> dates;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;  // column-major, equal lengths
    std::size_t vol_column = 0;                // index of "rolling_vol"

    std::size_t rows() const { return dates.empty() ? 0 : dates.size(); }
    std::size_t n_features() const { return columns.size(); }
    std::vector<double> row(std::size_t r) const;
};

// Joins log returns, rolling volatility, and (when given) the one-step SV
// forecast: the forecast dated t+1 is known at t and sits on row t. Rows
// missing any component are dropped from the head; the final return date
// has no t+1 forecast to pair with, so a hybrid matrix ends one row early.
FeatureMatrix assemble_features(const ReturnSeries& returns, const VolSeries& vol,
                                const std::vector<sv::SvForecast>* sv_forecasts);

// Convenience wrapper matching the hybrid shape.
FeatureMatrix assemble_hybrid_features(const ReturnSeries& returns,
                                       const VolSeries& vol,
                                       const std::vector<sv::SvForecast>& sv_forecasts);

// Supervised sequences over rows [row_begin, row_end) of the matrix:
// input k covers rows [row_begin+k, row_begin+k+lookback) and its target is
// the rolling volatility at row row_begin+k+lookback (still inside the
// range). Count = range rows - lookback.
struct SequenceSet {
    nn::Dataset data;
    std::vector<Date> target_dates;
};

SequenceSet make_sequences(const FeatureMatrix& features, int lookback,
                           std::size_t row_begin, std::size_t row_end);

inline SequenceSet make_sequences(const FeatureMatrix& features, int lookback) {
    return make_sequences(features, lookback, 0, features.rows());
}

}  // namespace volcast::pipeline
