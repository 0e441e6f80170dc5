#pragma once

#include <cstdint>
#include <vector>

#include "volcast/losses.hpp"
#include "volcast/lstm.hpp"

namespace volcast::nn {

// Supervised sequence-regression set: one (lookback x features) input per
// scalar target.
struct Dataset {
    std::vector<Mat> inputs;
    std::vector<double> targets;

    std::size_t size() const { return inputs.size(); }
};

struct TrainOptions {
    int max_epochs = 50;
    int patience = 5;
    int batch_size = 32;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
};

struct TrainReport {
    int epochs_run = 0;
    int best_epoch = 0;  // 1-based index into the loss curves
    std::vector<double> train_loss_curve;
    std::vector<double> val_loss_curve;
    double best_val_loss = 0.0;
};

// w <- w - lr * g over every parameter.
void sgd_step(LstmNetwork& net, LstmNetwork& grads, double learning_rate);

// Mean gradient of the configured training loss over the batch, written
// into `grads` (which is zeroed first). Samples are processed in fixed
// chunks and the chunk sums reduced in order, so the result is bit-identical
// for any thread count. The default entry point parallelizes over chunks
// with OpenMP; the serial variant is the reference implementation.
void batch_gradients(const LstmNetwork& net, const Dataset& data,
                     const std::vector<std::size_t>& batch_indices,
                     const DropoutMasks& masks, LstmNetwork& grads);
void batch_gradients_serial(const LstmNetwork& net, const Dataset& data,
                            const std::vector<std::size_t>& batch_indices,
                            const DropoutMasks& masks, LstmNetwork& grads);

// Predictions for a whole dataset (dropout inactive).
std::vector<double> predict(const LstmNetwork& net, const Dataset& data);

// Mini-batch SGD with per-epoch validation, early stopping after `patience`
// epochs without improvement, and restoration of the best-epoch weights.
// Throws numeric_error (with the epoch index) if a loss turns non-finite.
TrainReport train(LstmNetwork& net, const Dataset& train_set,
                  const Dataset& val_set, const TrainOptions& options);

}  // namespace volcast::nn
