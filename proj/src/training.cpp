#include "volcast/training.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "volcast/errors.hpp"

namespace volcast::nn {

namespace {

// Chunk width for deterministic batch-gradient reduction. Fixed so that the
// summation tree does not depend on the number of threads.
constexpr std::size_t kGradChunk = 8;

void add_into(LstmNetwork& into, LstmNetwork& from) {
    for_each_param(into, from, [](double& a, double& b) { a += b; });
}

void sample_gradient(const LstmNetwork& net, const Dataset& data,
                     std::size_t index, const DropoutMasks& masks,
                     std::size_t batch_size, LstmNetwork& grads) {
    ForwardCache cache;
    const double pred = forward_cached(net, data.inputs[index], masks, cache);
    const double d_pred =
        loss_gradient(net.loss, data.targets[index], pred, batch_size);
    backward(net, masks, cache, d_pred, grads);
}

}  // namespace

void sgd_step(LstmNetwork& net, LstmNetwork& grads, double learning_rate) {
    if (learning_rate < 0.0) throw data_error("sgd_step: negative learning rate");
    for_each_param(net, grads, [learning_rate](double& w, double& grad) {
        w -= learning_rate * grad;
    });
}

void batch_gradients(const LstmNetwork& net, const Dataset& data,
                     const std::vector<std::size_t>& batch_indices,
                     const DropoutMasks& masks, LstmNetwork& grads) {
    for_each_param(grads, [](double& g) { g = 0.0; });
    const std::size_t n = batch_indices.size();
    if (n == 0) throw data_error("batch_gradients: empty batch");
    const std::size_t n_chunks = (n + kGradChunk - 1) / kGradChunk;
    std::vector<LstmNetwork> chunk_grads(n_chunks, zero_like(net));

#pragma omp parallel for schedule(dynamic)
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {
        const std::size_t begin = chunk * kGradChunk;
        const std::size_t end = std::min(begin + kGradChunk, n);
        for (std::size_t k = begin; k < end; ++k)
            sample_gradient(net, data, batch_indices[k], masks, n,
                            chunk_grads[chunk]);
    }

    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk)
        add_into(grads, chunk_grads[chunk]);
}

void batch_gradients_serial(const LstmNetwork& net, const Dataset& data,
                            const std::vector<std::size_t>& batch_indices,
                            const DropoutMasks& masks, LstmNetwork& grads) {
    for_each_param(grads, [](double& g) { g = 0.0; });
    const std::size_t n = batch_indices.size();
    if (n == 0) throw data_error("batch_gradients: empty batch");
    const std::size_t n_chunks = (n + kGradChunk - 1) / kGradChunk;

    LstmNetwork chunk_grad = zero_like(net);
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {
        for_each_param(chunk_grad, [](double& g) { g = 0.0; });
        const std::size_t begin = chunk * kGradChunk;
        const std::size_t end = std::min(begin + kGradChunk, n);
        for (std::size_t k = begin; k < end; ++k)
            sample_gradient(net, data, batch_indices[k], masks, n, chunk_grad);
        add_into(grads, chunk_grad);
    }
}

std::vector<double> predict(const LstmNetwork& net, const Dataset& data) {
    std::vector<double> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out[i] = forward(net, data.inputs[i]);
    return out;
}

TrainReport train(LstmNetwork& net, const Dataset& train_set,
                  const Dataset& val_set, const TrainOptions& options) {
    if (train_set.size() == 0 || val_set.size() == 0)
        throw data_error("train: empty training or validation set");
    if (options.max_epochs < 1) throw data_error("train: max_epochs must be >= 1");

    Rng rng(options.seed);
    TrainReport report;
    LstmNetwork grads = zero_like(net);
    LstmNetwork best_weights = net;
    double best_val = std::numeric_limits<double>::infinity();
    int epochs_since_improvement = 0;

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
        rng.shuffle(order);
        const std::size_t bs = static_cast<std::size_t>(options.batch_size);
        for (std::size_t start = 0; start < order.size(); start += bs) {
            const std::size_t end = std::min(start + bs, order.size());
            std::vector<std::size_t> batch(
                order.begin() + static_cast<std::ptrdiff_t>(start),
                order.begin() + static_cast<std::ptrdiff_t>(end));
            const DropoutMasks masks = sample_dropout_masks(net, rng);
            batch_gradients(net, train_set, batch, masks, grads);
            sgd_step(net, grads, options.learning_rate);
        }

        const std::vector<double> train_pred = predict(net, train_set);
        const std::vector<double> val_pred = predict(net, val_set);
        const double train_loss = loss_value(net.loss, train_set.targets, train_pred);
        const double val_loss = loss_value(net.loss, val_set.targets, val_pred);
        report.train_loss_curve.push_back(train_loss);
        report.val_loss_curve.push_back(val_loss);
        report.epochs_run = epoch;
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw numeric_error("training diverged at epoch " + std::to_string(epoch));

        if (val_loss < best_val) {
            best_val = val_loss;
            report.best_epoch = epoch;
            best_weights = net;
            epochs_since_improvement = 0;
        } else {
            ++epochs_since_improvement;
            if (epochs_since_improvement >= options.patience) break;
        }
    }

    net = best_weights;
    report.best_val_loss = best_val;
    return report;
}

}  // namespace volcast::nn
