#pragma once

#include <string>
#include <vector>

namespace volcast::pipeline {

enum class ScalerKind { minmax, standard, robust };

ScalerKind scaler_kind_from_string(const std::string& name);
std::string to_string(ScalerKind kind);

// Per-column affine scaling fitted on a block of rows. minmax maps the
// fitted minimum to 1e-11 and the fitted maximum to 1 exactly; standard maps
// to zero mean and unit sample variance; robust centers on the median and
// divides by the interquartile range (unit scale when the IQR is zero).
class Scaler {
public:
    static constexpr double kMinMaxEpsilon = 1e-11;

    // rows: row-major data, all rows the same width, at least 2 rows.
    // Throws numeric_error for a constant column under minmax/standard.
    static Scaler fit(ScalerKind kind, const std::vector<std::vector<double>>& rows);

    std::vector<std::vector<double>> transform(
        const std::vector<std::vector<double>>& rows) const;
    std::vector<std::vector<double>> inverse_transform(
        const std::vector<std::vector<double>>& rows) const;

    double transform_value(std::size_t column, double value) const;
    double inverse_value(std::size_t column, double value) const;

    ScalerKind kind() const { return kind_; }
    std::size_t columns() const { return center_.size(); }

    // Fitted parameters, meaning depends on kind: (min, max) for minmax,
    // (mean, stddev) for standard, (median, iqr) for robust.
    const std::vector<double>& center() const { return center_; }
    const std::vector<double>& spread() const { return spread_; }

private:
    ScalerKind kind_ = ScalerKind::minmax;
    std::vector<double> center_;
    std::vector<double> spread_;
};

}  // namespace volcast::pipeline
