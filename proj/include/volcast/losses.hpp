#pragma once

#include <vector>

#include "volcast/lstm.hpp"

namespace volcast::nn {

// Reported loss values. MADL is the exact directional form:
// mean of -sign(y_true * y_pred) * |y_true|.
double loss_value(LossKind kind, const std::vector<double>& y_true,
                  const std::vector<double>& y_pred);

// Loss actually optimized. Identical to loss_value except for MADL, whose
// sign factor is replaced by the smooth surrogate tanh(k * y_true * y_pred)
// so gradients exist; k = 100.
double training_loss_value(LossKind kind, const std::vector<double>& y_true,
                           const std::vector<double>& y_pred);

inline constexpr double kMadlSurrogateSharpness = 100.0;

// d training_loss / d y_pred[i] for a batch of size n (mean reduction).
double loss_gradient(LossKind kind, double y_true, double y_pred, std::size_t n);

}  // namespace volcast::nn
