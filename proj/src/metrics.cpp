#include "volcast/metrics.hpp"

#include <cmath>

#include "volcast/errors.hpp"

namespace volcast::eval {

MetricReport point_metrics(const std::vector<double>& y_true,
                           const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw data_error("point_metrics: length mismatch");
    if (y_true.empty()) throw data_error("point_metrics: empty input");
    MetricReport r;
    r.n = y_true.size();
    const double n = static_cast<double>(r.n);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double e = y_true[i] - y_pred[i];
        r.mse += e * e;
        r.mae += std::abs(e);
        if (y_true[i] == 0.0)
            throw numeric_error("point_metrics: zero actual value, MAPE undefined");
        r.mape_percent += std::abs(e / y_true[i]);
    }
    r.mse /= n;
    r.mae /= n;
    r.mape_percent = r.mape_percent / n * 100.0;
    return r;
}

}  // namespace volcast::eval
