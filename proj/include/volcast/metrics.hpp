#pragma once

#include <cstddef>
#include <vector>

namespace volcast::eval {

struct MetricReport {
    double mape_percent = 0.0;
    double mse = 0.0;
    double mae = 0.0;
    std::size_t n = 0;
};

// MSE, MAE, and MAPE (in percent). MAPE requires every y_true != 0.
MetricReport point_metrics(const std::vector<double>& y_true,
                           const std::vector<double>& y_pred);

}  // namespace volcast::eval
