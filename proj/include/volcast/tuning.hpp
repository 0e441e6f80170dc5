#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "volcast/training.hpp"

namespace volcast::nn {

// One sampled network configuration.
struct HyperParams {
    double learning_rate = 1e-3;
    LossKind loss = LossKind::mse;
    std::vector<std::size_t> lstm_units;          // one entry per LSTM layer
    std::vector<Activation> lstm_activations;
    std::vector<double> recurrent_dropouts;
    std::vector<std::size_t> dense_units;         // one entry per dense layer
    std::vector<Activation> dense_activations;
    double dropout = 0.0;

    bool operator==(const HyperParams&) const = default;
};

// Candidate values for each tunable field. Defaults cover the full grid the
// tuner draws from; tests collapse individual axes.
struct SearchSpace {
    std::vector<int> n_lstm_layers = {1, 2, 3};
    std::vector<int> n_dense_layers = {0, 1, 2, 3};
    std::vector<std::size_t> units = {32, 64, 128};
    std::vector<double> learning_rates = {1e-4, 5e-4, 1e-3, 5e-3, 1e-2};
    std::vector<Activation> activations = {Activation::tanh, Activation::relu,
                                           Activation::sigmoid};
    std::vector<double> recurrent_dropouts = {0.0, 0.05, 0.1, 0.15, 0.2};
    std::vector<double> dropouts = {0.0, 0.05, 0.1, 0.15, 0.2};
    std::vector<LossKind> losses = {LossKind::mse, LossKind::mae};

    // Number of distinct configurations the space contains (summed over
    // layer-count choices); saturates at a large sentinel to avoid overflow.
    double point_count() const;
};

HyperParams sample_hyperparams(const SearchSpace& space, Rng& rng);

LstmNetwork build_network(const HyperParams& hp, std::size_t input_dim,
                          std::uint64_t init_seed);

struct TrialOutcome {
    HyperParams params;
    double mean_val_loss = 0.0;             // +inf when every execution failed
    std::vector<double> execution_losses;   // +inf entries for failed runs
};

struct RandomSearchResult {
    HyperParams best;
    std::size_t best_trial = 0;
    std::vector<TrialOutcome> trials;
};

// Uniform random search over the space: n_trials configurations (sampled
// without replacement while the space has at least n_trials points), each
// trained executions_per_trial times from independent seeded
// initializations; the winner minimizes the mean best validation loss.
// Executions run concurrently in the default entry point; the serial
// variant is the reference implementation and produces identical results.
RandomSearchResult random_search(const SearchSpace& space, int n_trials,
                                 int executions_per_trial,
                                 const Dataset& train_set, const Dataset& val_set,
                                 const TrainOptions& base_options,
                                 std::uint64_t seed);
RandomSearchResult random_search_serial(const SearchSpace& space, int n_trials,
                                        int executions_per_trial,
                                        const Dataset& train_set,
                                        const Dataset& val_set,
                                        const TrainOptions& base_options,
                                        std::uint64_t seed);

}  // namespace volcast::nn
