#include "volcast/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "volcast/errors.hpp"

namespace volcast::nn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_count(std::size_t base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= static_cast<double>(base);
    return r;
}

struct ExecutionSlot {
    std::size_t trial;
    int execution;
};

double run_execution(const HyperParams& hp, std::size_t input_dim,
                     const Dataset& train_set, const Dataset& val_set,
                     const TrainOptions& base_options, std::uint64_t seed) {
    TrainOptions options = base_options;
    options.learning_rate = hp.learning_rate;
    options.seed = derive_seed(seed, 1, 0, 0);
    LstmNetwork net = build_network(hp, input_dim, derive_seed(seed, 2, 0, 0));
    try {
        const TrainReport report = train(net, train_set, val_set, options);
        return report.best_val_loss;
    } catch (const numeric_error&) {
        return kInf;  // failed executions score as +inf
    }
}

template <bool Parallel>
RandomSearchResult random_search_impl(const SearchSpace& space, int n_trials,
                                      int executions_per_trial,
                                      const Dataset& train_set,
                                      const Dataset& val_set,
                                      const TrainOptions& base_options,
                                      std::uint64_t seed) {
    if (n_trials < 1) throw data_error("random_search: n_trials must be >= 1");
    if (executions_per_trial < 1)
        throw data_error("random_search: executions_per_trial must be >= 1");
    if (train_set.size() == 0) throw data_error("random_search: empty training set");

    // Sample all configurations up front from one stream; rejection keeps
    // the draw without replacement while enough distinct points exist.
    Rng rng(derive_seed(seed, 0xC0'FFEE, 0, 0));
    const bool without_replacement =
        space.point_count() >= static_cast<double>(n_trials);
    std::vector<HyperParams> configs;
    configs.reserve(static_cast<std::size_t>(n_trials));
    int attempts = 0;
    const int max_attempts = 1000 * n_trials;
    while (static_cast<int>(configs.size()) < n_trials) {
        HyperParams hp = sample_hyperparams(space, rng);
        const bool duplicate =
            std::find(configs.begin(), configs.end(), hp) != configs.end();
        if (duplicate && without_replacement && ++attempts < max_attempts) continue;
        configs.push_back(std::move(hp));
    }

    RandomSearchResult result;
    result.trials.resize(static_cast<std::size_t>(n_trials));
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
        result.trials[t].params = configs[t];
        result.trials[t].execution_losses.assign(
            static_cast<std::size_t>(executions_per_trial), kInf);
    }

    std::vector<ExecutionSlot> slots;
    slots.reserve(static_cast<std::size_t>(n_trials * executions_per_trial));
    for (std::size_t t = 0; t < static_cast<std::size_t>(n_trials); ++t)
        for (int e = 0; e < executions_per_trial; ++e)
            slots.push_back({t, e});

    const std::size_t input_dim = train_set.inputs.front().cols;
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const auto [t, e] = slots[s];
            result.trials[t].execution_losses[static_cast<std::size_t>(e)] =
                run_execution(configs[t], input_dim, train_set, val_set,
                              base_options,
                              derive_seed(seed, t, static_cast<std::uint64_t>(e)));
        }
    } else {
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const auto [t, e] = slots[s];
            result.trials[t].execution_losses[static_cast<std::size_t>(e)] =
                run_execution(configs[t], input_dim, train_set, val_set,
                              base_options,
                              derive_seed(seed, t, static_cast<std::uint64_t>(e)));
        }
    }

    double best_score = kInf;
    result.best_trial = 0;
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
        auto& trial = result.trials[t];
        double mean = 0.0;
        for (double l : trial.execution_losses) mean += l;
        mean /= static_cast<double>(trial.execution_losses.size());
        trial.mean_val_loss = mean;
        if (mean < best_score) {
            best_score = mean;
            result.best_trial = t;
        }
    }
    result.best = result.trials[result.best_trial].params;
    return result;
}

}  // namespace

double SearchSpace::point_count() const {
    constexpr double cap = 1e18;
    double total = 0.0;
    for (int nl : n_lstm_layers) {
        const double lstm_combos =
            pow_count(units.size(), nl) * pow_count(activations.size(), nl) *
            pow_count(recurrent_dropouts.size(), nl);
        for (int nd : n_dense_layers) {
            const double dense_combos =
                pow_count(units.size(), nd) * pow_count(activations.size(), nd);
            total += lstm_combos * dense_combos;
            if (total > cap) return cap;
        }
    }
    total *= static_cast<double>(learning_rates.size()) *
             static_cast<double>(dropouts.size()) *
             static_cast<double>(losses.size());
    return std::min(total, cap);
}

HyperParams sample_hyperparams(const SearchSpace& space, Rng& rng) {
    auto pick = [&rng](const auto& values) {
        return values[static_cast<std::size_t>(
            rng.uniform_int(static_cast<int>(values.size())))];
    };
    HyperParams hp;
    hp.learning_rate = pick(space.learning_rates);
    hp.loss = pick(space.losses);
    hp.dropout = pick(space.dropouts);
    const int n_lstm = pick(space.n_lstm_layers);
    const int n_dense = pick(space.n_dense_layers);
    for (int i = 0; i < n_lstm; ++i) {
        hp.lstm_units.push_back(pick(space.units));
        hp.lstm_activations.push_back(pick(space.activations));
        hp.recurrent_dropouts.push_back(pick(space.recurrent_dropouts));
    }
    for (int i = 0; i < n_dense; ++i) {
        hp.dense_units.push_back(pick(space.units));
        hp.dense_activations.push_back(pick(space.activations));
    }
    return hp;
}

LstmNetwork build_network(const HyperParams& hp, std::size_t input_dim,
                          std::uint64_t init_seed) {
    if (hp.lstm_units.empty())
        throw config_error("network needs at least one recurrent layer");
    LstmNetwork net;
    net.input_dim = input_dim;
    net.loss = hp.loss;
    net.dropout = hp.dropout;
    for (std::size_t i = 0; i < hp.lstm_units.size(); ++i) {
        LstmLayer layer;
        layer.units = hp.lstm_units[i];
        layer.activation = hp.lstm_activations[i];
        layer.recurrent_dropout = hp.recurrent_dropouts[i];
        net.lstm.push_back(std::move(layer));
    }
    for (std::size_t i = 0; i < hp.dense_units.size(); ++i) {
        DenseLayer layer;
        layer.activation = hp.dense_activations[i];
        layer.biases.assign(hp.dense_units[i], 0.0);
        net.dense.push_back(std::move(layer));
    }
    Rng rng(init_seed);
    init_weights(net, rng);
    return net;
}

RandomSearchResult random_search(const SearchSpace& space, int n_trials,
                                 int executions_per_trial,
                                 const Dataset& train_set, const Dataset& val_set,
                                 const TrainOptions& base_options,
                                 std::uint64_t seed) {
    return random_search_impl<true>(space, n_trials, executions_per_trial,
                                    train_set, val_set, base_options, seed);
}

RandomSearchResult random_search_serial(const SearchSpace& space, int n_trials,
                                        int executions_per_trial,
                                        const Dataset& train_set,
                                        const Dataset& val_set,
                                        const TrainOptions& base_options,
                                        std::uint64_t seed) {
    return random_search_impl<false>(space, n_trials, executions_per_trial,
                                     train_set, val_set, base_options, seed);
}

}  // namespace volcast::nn
