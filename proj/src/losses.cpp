#include "volcast/losses.hpp"

#include <cmath>

#include "volcast/errors.hpp"

namespace volcast::nn {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : x < 0.0 ? -1.0 : 0.0; }

void check_lengths(const std::vector<double>& y_true,
                   const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size()) throw data_error("loss: length mismatch");
    if (y_true.empty()) throw data_error("loss: empty input");
}

}  // namespace

double loss_value(LossKind kind, const std::vector<double>& y_true,
                  const std::vector<double>& y_pred) {
    check_lengths(y_true, y_pred);
    const double n = static_cast<double>(y_true.size());
    double total = 0.0;
    switch (kind) {
        case LossKind::mse:
            for (std::size_t i = 0; i < y_true.size(); ++i) {
                const double e = y_true[i] - y_pred[i];
                total += e * e;
            }
            break;
        case LossKind::mae:
            for (std::size_t i = 0; i < y_true.size(); ++i)
                total += std::abs(y_true[i] - y_pred[i]);
            break;
        case LossKind::madl:
            for (std::size_t i = 0; i < y_true.size(); ++i)
                total += -sign(y_true[i] * y_pred[i]) * std::abs(y_true[i]);
            break;
    }
    return total / n;
}

double training_loss_value(LossKind kind, const std::vector<double>& y_true,
                           const std::vector<double>& y_pred) {
    if (kind != LossKind::madl) return loss_value(kind, y_true, y_pred);
    check_lengths(y_true, y_pred);
    const double n = static_cast<double>(y_true.size());
    double total = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i)
        total += -std::tanh(kMadlSurrogateSharpness * y_true[i] * y_pred[i]) *
                 std::abs(y_true[i]);
    return total / n;
}

double loss_gradient(LossKind kind, double y_true, double y_pred, std::size_t n) {
    const double fn = static_cast<double>(n);
    switch (kind) {
        case LossKind::mse:
            return 2.0 * (y_pred - y_true) / fn;
        case LossKind::mae:
            return sign(y_pred - y_true) / fn;
        case LossKind::madl: {
            const double t = std::tanh(kMadlSurrogateSharpness * y_true * y_pred);
            return -kMadlSurrogateSharpness * (1.0 - t * t) * y_true *
                   std::abs(y_true) / fn;
        }
    }
    return 0.0;
}

}  // namespace volcast::nn
