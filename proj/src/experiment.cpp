#include "volcast/experiment.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "volcast/csv.hpp"
#include "volcast/errors.hpp"
#include "volcast/market_data.hpp"

namespace volcast::pipeline {

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "sv") return ModelKind::sv;
    if (name == "lstm") return ModelKind::lstm;
    if (name == "hybrid") return ModelKind::hybrid;
    throw config_error("unknown model kind '" + name + "'");
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::sv: return "sv";
        case ModelKind::lstm: return "lstm";
        case ModelKind::hybrid: return "hybrid";
    }
    return "?";
}

namespace {

std::vector<std::vector<double>> matrix_rows(const FeatureMatrix& m,
                                             std::size_t begin, std::size_t end) {
    std::vector<std::vector<double>> rows;
    rows.reserve(end - begin);
    for (std::size_t r = begin; r < end; ++r) rows.push_back(m.row(r));
    return rows;
}

FeatureMatrix transform_matrix(const FeatureMatrix& m, const Scaler& scaler) {
    FeatureMatrix out = m;
    for (std::size_t c = 0; c < out.columns.size(); ++c)
        for (double& v : out.columns[c]) v = scaler.transform_value(c, v);
    return out;
}

}  // namespace

WindowResult run_lstm_window(const FeatureMatrix& features, const WindowRanges& rows,
                             const ExperimentPlan& plan, std::size_t window_index) {
    WindowResult result;
    result.index = window_index;
    result.rows = rows;

    // Tuning stage: scaler fit jointly on train+val rows.
    const Scaler scaler_a =
        Scaler::fit(plan.scaler, matrix_rows(features, rows.train_begin, rows.val_end));
    result.scaler_tuning = scaler_a;

    nn::TrainOptions tuning_options;
    tuning_options.max_epochs = plan.tuning_max_epochs;
    tuning_options.patience = plan.tuning_patience;
    tuning_options.batch_size = plan.batch_size;

    if (plan.pinned) {
        result.hp = *plan.pinned;
        result.tuned = false;
    } else {
        const FeatureMatrix scaled_a = transform_matrix(features, scaler_a);
        const SequenceSet train_a =
            make_sequences(scaled_a, plan.lookback, rows.train_begin, rows.train_end);
        const SequenceSet val_a =
            make_sequences(scaled_a, plan.lookback, rows.train_end, rows.val_end);
        const nn::RandomSearchResult search = nn::random_search(
            plan.search_space, plan.tuning_trials, plan.tuning_executions,
            train_a.data, val_a.data, tuning_options,
            derive_seed(plan.seed, window_index, 100));
        result.hp = search.best;
        result.tuned = true;
        for (const auto& trial : search.trials)
            result.trial_mean_losses.push_back(trial.mean_val_loss);
    }

    // Final stage: scaler refit on the training rows alone.
    const Scaler scaler_b =
        Scaler::fit(plan.scaler, matrix_rows(features, rows.train_begin, rows.train_end));
    result.scaler_final = scaler_b;
    const FeatureMatrix scaled_b = transform_matrix(features, scaler_b);

    const SequenceSet train_b =
        make_sequences(scaled_b, plan.lookback, rows.train_begin, rows.train_end);
    const SequenceSet val_b =
        make_sequences(scaled_b, plan.lookback, rows.train_end, rows.val_end);
    // Warm-up: test sequences start lookback rows inside validation so every
    // test day gets a forecast.
    const std::size_t lb = static_cast<std::size_t>(plan.lookback);
    const SequenceSet test_b =
        make_sequences(scaled_b, plan.lookback, rows.val_end - lb, rows.test_end);

    nn::LstmNetwork net = nn::build_network(result.hp, features.n_features(),
                                            derive_seed(plan.seed, window_index, 200));
    nn::TrainOptions final_options;
    final_options.max_epochs = plan.final_max_epochs;
    final_options.patience = plan.final_patience;
    final_options.batch_size = plan.batch_size;
    final_options.learning_rate = result.hp.learning_rate;
    final_options.seed = derive_seed(plan.seed, window_index, 300);
    result.train_report = nn::train(net, train_b.data, val_b.data, final_options);

    const std::vector<double> scaled_pred = nn::predict(net, test_b.data);
    result.network = std::move(net);
    result.dates = test_b.target_dates;
    result.y_pred.resize(scaled_pred.size());
    for (std::size_t i = 0; i < scaled_pred.size(); ++i)
        result.y_pred[i] = scaler_b.inverse_value(features.vol_column, scaled_pred[i]);
    result.y_true.resize(test_b.target_dates.size());
    for (std::size_t i = 0; i < result.y_true.size(); ++i) {
        const std::size_t target_row = rows.val_end - lb + i + lb;
        result.y_true[i] = features.columns[features.vol_column][target_row];
    }
    result.metrics = eval::point_metrics(result.y_true, result.y_pred);
    return result;
}

namespace {

WindowResult run_sv_window(const FeatureMatrix& features, const WindowRanges& rows,
                           const std::map<Date, double>& sv_by_date,
                           std::size_t window_index) {
    WindowResult result;
    result.index = window_index;
    result.rows = rows;
    for (std::size_t r = rows.val_end; r < rows.test_end; ++r) {
        const Date date = features.dates[r];
        const auto it = sv_by_date.find(date);
        if (it == sv_by_date.end())
            throw data_error("no SV forecast for test date " + format_date(date));
        result.dates.push_back(date);
        result.y_true.push_back(features.columns[features.vol_column][r]);
        result.y_pred.push_back(it->second);
    }
    result.metrics = eval::point_metrics(result.y_true, result.y_pred);
    return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan, const PriceSeries& prices) {
    ExperimentResult result;
    result.model = plan.model;

    const ReturnSeries returns = market::log_returns(prices);
    const VolSeries vol = market::rolling_volatility(returns, plan.vol_window);

    // The SV series is materialized for every model kind: it is the hybrid
    // feature, the sv model's forecast, and it pins the common row domain so
    // forecast files from all three kinds align date-for-date.
    result.sv_forecasts = sv::rolling_sv_forecast(
        returns, plan.sv_train_len, plan.sv_sampler, derive_seed(plan.seed, 7));

    result.features = assemble_hybrid_features(returns, vol, result.sv_forecasts);
    if (plan.model == ModelKind::lstm) {
        // Same rows, minus the SV column.
        result.features.columns.pop_back();
        result.features.column_names.pop_back();
    }

    const std::vector<WindowRanges> window_rows =
        split_windows(result.features.rows(), plan.windows);
    result.windows.resize(window_rows.size());

    if (plan.model == ModelKind::sv) {
        std::map<Date, double> sv_by_date;
        for (const auto& f : result.sv_forecasts) sv_by_date[f.date] = f.median_vol;
        for (std::size_t w = 0; w < window_rows.size(); ++w)
            result.windows[w] = run_sv_window(result.features, window_rows[w],
                                              sv_by_date, w);
    } else {
        std::vector<std::string> errors(window_rows.size());
#pragma omp parallel for schedule(dynamic)
        for (std::size_t w = 0; w < window_rows.size(); ++w) {
            try {
                result.windows[w] =
                    run_lstm_window(result.features, window_rows[w], plan, w);
            } catch (const std::exception& e) {
                errors[w] = e.what();
            }
        }
        for (std::size_t w = 0; w < errors.size(); ++w)
            if (!errors[w].empty())
                throw numeric_error("window " + std::to_string(w) + ": " + errors[w]);
    }

    for (const auto& window : result.windows) {
        result.dates.insert(result.dates.end(), window.dates.begin(), window.dates.end());
        result.y_true.insert(result.y_true.end(), window.y_true.begin(),
                             window.y_true.end());
        result.y_pred.insert(result.y_pred.end(), window.y_pred.begin(),
                             window.y_pred.end());
    }
    return result;
}

void write_forecasts_csv(const std::string& path, const std::vector<Date>& dates,
                         const std::vector<double>& y_true,
                         const std::vector<double>& y_pred) {
    std::ostringstream out;
    out << "date,y_true,y_pred\n";
    for (std::size_t i = 0; i < dates.size(); ++i)
        out << format_date(dates[i]) << ',' << format_double(y_true[i]) << ','
            << format_double(y_pred[i]) << '\n';
    write_text_file(path, out.str());
}

}  // namespace volcast::pipeline
