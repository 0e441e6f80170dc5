#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "volcast/features.hpp"
#include "volcast/metrics.hpp"
#include "volcast/scaler.hpp"
#include "volcast/sv_model.hpp"
#include "volcast/tuning.hpp"
#include "volcast/windows.hpp"

namespace volcast::pipeline {

enum class ModelKind { sv, lstm, hybrid };

ModelKind model_kind_from_string(const std::string& name);
std::string to_string(ModelKind kind);

struct ExperimentPlan {
    ModelKind model = ModelKind::hybrid;
    int lookback = 21;
    ScalerKind scaler = ScalerKind::minmax;
    nn::LossKind loss = nn::LossKind::mse;
    WindowPlan windows;
    int vol_window = 21;
    int sv_train_len = 504;
    sv::SamplerConfig sv_sampler;

    int tuning_trials = 25;
    int tuning_executions = 3;
    int tuning_max_epochs = 50;
    int tuning_patience = 5;
    int final_max_epochs = 100;
    int final_patience = 10;
    int batch_size = 32;
    nn::SearchSpace search_space;
    std::optional<nn::HyperParams> pinned;  // skips tuning when set

    std::uint64_t seed = 0;
};

struct WindowResult {
    std::size_t index = 0;
    WindowRanges rows;
    bool tuned = false;
    nn::HyperParams hp;
    std::vector<double> trial_mean_losses;
    std::optional<Scaler> scaler_tuning;  // fit on train+val, drives tuning
    std::optional<Scaler> scaler_final;   // fit on train only, drives the final fit
    std::optional<nn::LstmNetwork> network;
    std::optional<nn::TrainReport> train_report;
    std::vector<Date> dates;
    std::vector<double> y_true;
    std::vector<double> y_pred;
    eval::MetricReport metrics;
};

struct ExperimentResult {
    ModelKind model = ModelKind::hybrid;
    FeatureMatrix features;
    std::vector<sv::SvForecast> sv_forecasts;
    std::vector<WindowResult> windows;
    // Concatenated out-of-sample test segments.
    std::vector<Date> dates;
    std::vector<double> y_true;
    std::vector<double> y_pred;
};

// One window's tune/fit/predict cycle for the lstm or hybrid model. Exposed
// so leakage and determinism checks can drive it directly on fixtures.
WindowResult run_lstm_window(const FeatureMatrix& features, const WindowRanges& rows,
                             const ExperimentPlan& plan, std::size_t window_index);

// Full run: derives returns and rolling volatility, materializes the shared
// rolling SV forecast series, assembles the feature matrix (identical row
// domain for every model kind), then fits the windows. Window fits run
// concurrently; errors carry the window index.
ExperimentResult run_experiment(const ExperimentPlan& plan, const PriceSeries& prices);

void write_forecasts_csv(const std::string& path, const std::vector<Date>& dates,
                         const std::vector<double>& y_true,
                         const std::vector<double>& y_pred);

}  // namespace volcast::pipeline
