#include "volcast/config.hpp"

#include <charconv>
#include <sstream>

#include "volcast/csv.hpp"
#include "volcast/errors.hpp"

namespace volcast::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Accumulates validation problems; the caller throws once at the end.
struct Validator {
    const ConfigFile& file;
    std::vector<std::string> errors;

    void fail(const std::string& message) { errors.push_back(message); }

    template <typename Fn>
    void set(const std::string& key, Fn&& apply) {
        const auto raw = file.get(key);
        if (!raw) return;
        try {
            apply(*raw);
        } catch (const std::exception& e) {
            fail(key + ": " + e.what());
        }
    }

    void set_int(const std::string& key, int& target, int lo, int hi) {
        set(key, [&](const std::string& raw) {
            int v = 0;
            const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
            if (res.ec != std::errc{} || res.ptr != raw.data() + raw.size())
                throw config_error("not an integer: '" + raw + "'");
            if (v < lo || v > hi)
                throw config_error("value " + raw + " outside [" + std::to_string(lo) +
                                   ", " + std::to_string(hi) + "]");
            target = v;
        });
    }

    void set_double(const std::string& key, double& target) {
        set(key, [&](const std::string& raw) { target = parse_double(raw, key, 0); });
    }

    void set_seed(const std::string& key, std::uint64_t& target) {
        set(key, [&](const std::string& raw) {
            std::uint64_t v = 0;
            const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
            if (res.ec != std::errc{} || res.ptr != raw.data() + raw.size())
                throw config_error("not an unsigned integer: '" + raw + "'");
            target = v;
        });
    }
};

std::vector<double> parse_double_list(const std::string& raw, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(raw)) out.push_back(parse_double(item, key, 0));
    if (out.empty()) throw config_error("empty list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& raw) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(raw)) {
        std::size_t v = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size() || v == 0)
            throw config_error("not a positive integer: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw config_error("empty list");
    return out;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("unterminated section header at line " +
                                   std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("empty key at line " + std::to_string(line_no));
        const std::string full = section.empty() ? key : section + "." + key;
        cfg.values_[full] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    try {
        return parse(read_text_file(path));
    } catch (const data_error& e) {
        throw config_error(e.what());
    }
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

ForecastConfig build_forecast_config(const ConfigFile& file) {
    ForecastConfig cfg;
    Validator v{file, {}};

    if (const auto prices = file.get("data.prices"))
        cfg.prices_path = *prices;
    else
        v.fail("data.prices: required");
    v.set("out_dir", [&](const std::string& raw) { cfg.out_dir = raw; });

    auto& plan = cfg.plan;
    v.set("plan.model", [&](const std::string& raw) {
        plan.model = pipeline::model_kind_from_string(raw);
    });
    v.set_int("plan.lookback", plan.lookback, 1, 100000);
    v.set("plan.scaler", [&](const std::string& raw) {
        plan.scaler = pipeline::scaler_kind_from_string(raw);
    });
    v.set("plan.loss", [&](const std::string& raw) {
        plan.loss = nn::loss_from_string(raw);
    });
    v.set_seed("seed", plan.seed);

    v.set_int("windows.train_days", plan.windows.train_days, 1, 1 << 24);
    v.set_int("windows.val_days", plan.windows.val_days, 1, 1 << 24);
    v.set_int("windows.test_days", plan.windows.test_days, 1, 1 << 24);
    v.set_int("windows.step_days", plan.windows.step_days, 1, 1 << 24);
    v.set_int("plan.vol_window", plan.vol_window, 2, 1 << 20);

    v.set_int("sv.train_len", plan.sv_train_len, 50, 1 << 24);
    v.set_int("sv.n_iter", plan.sv_sampler.n_iter, 2, 1 << 24);
    v.set_int("sv.n_burnin", plan.sv_sampler.n_burnin, 0, 1 << 24);
    v.set_int("sv.thin", plan.sv_sampler.thin, 1, 1 << 20);
    if (plan.sv_sampler.n_burnin >= plan.sv_sampler.n_iter)
        v.fail("sv.n_burnin: must be smaller than sv.n_iter");

    v.set_int("tuning.trials", plan.tuning_trials, 1, 1 << 20);
    v.set_int("tuning.executions", plan.tuning_executions, 1, 1 << 20);
    v.set_int("tuning.max_epochs", plan.tuning_max_epochs, 1, 1 << 20);
    v.set_int("tuning.patience", plan.tuning_patience, 1, 1 << 20);
    v.set_int("final.max_epochs", plan.final_max_epochs, 1, 1 << 20);
    v.set_int("final.patience", plan.final_patience, 1, 1 << 20);
    v.set_int("plan.batch_size", plan.batch_size, 1, 1 << 20);

    // Search-space overrides. The loss axis follows the plan's loss unless
    // listed explicitly.
    plan.search_space.losses = {plan.loss};
    v.set("search.losses", [&](const std::string& raw) {
        plan.search_space.losses.clear();
        for (const auto& item : split_list(raw))
            plan.search_space.losses.push_back(nn::loss_from_string(item));
    });
    v.set("search.units", [&](const std::string& raw) {
        plan.search_space.units = parse_size_list(raw);
    });
    v.set("search.learning_rates", [&](const std::string& raw) {
        plan.search_space.learning_rates = parse_double_list(raw, "search.learning_rates");
    });
    v.set("search.activations", [&](const std::string& raw) {
        plan.search_space.activations.clear();
        for (const auto& item : split_list(raw))
            plan.search_space.activations.push_back(nn::activation_from_string(item));
    });
    v.set("search.n_lstm_layers", [&](const std::string& raw) {
        plan.search_space.n_lstm_layers.clear();
        for (std::size_t n : parse_size_list(raw))
            plan.search_space.n_lstm_layers.push_back(static_cast<int>(n));
    });
    v.set("search.n_dense_layers", [&](const std::string& raw) {
        plan.search_space.n_dense_layers.clear();
        for (const auto& item : split_list(raw))
            plan.search_space.n_dense_layers.push_back(
                static_cast<int>(parse_double(item, "search.n_dense_layers", 0)));
    });
    v.set("search.recurrent_dropouts", [&](const std::string& raw) {
        plan.search_space.recurrent_dropouts =
            parse_double_list(raw, "search.recurrent_dropouts");
    });
    v.set("search.dropouts", [&](const std::string& raw) {
        plan.search_space.dropouts = parse_double_list(raw, "search.dropouts");
    });

    // Pinned hyperparameters skip tuning entirely.
    if (file.has("pin.lstm_units")) {
        nn::HyperParams hp;
        hp.loss = plan.loss;
        v.set_double("pin.learning_rate", hp.learning_rate);
        v.set("pin.loss", [&](const std::string& raw) {
            hp.loss = nn::loss_from_string(raw);
        });
        v.set_double("pin.dropout", hp.dropout);
        v.set("pin.lstm_units", [&](const std::string& raw) {
            hp.lstm_units = parse_size_list(raw);
        });
        v.set("pin.lstm_activations", [&](const std::string& raw) {
            for (const auto& item : split_list(raw))
                hp.lstm_activations.push_back(nn::activation_from_string(item));
        });
        v.set("pin.recurrent_dropouts", [&](const std::string& raw) {
            hp.recurrent_dropouts = parse_double_list(raw, "pin.recurrent_dropouts");
        });
        v.set("pin.dense_units", [&](const std::string& raw) {
            hp.dense_units = parse_size_list(raw);
        });
        v.set("pin.dense_activations", [&](const std::string& raw) {
            for (const auto& item : split_list(raw))
                hp.dense_activations.push_back(nn::activation_from_string(item));
        });
        if (hp.lstm_activations.empty())
            hp.lstm_activations.assign(hp.lstm_units.size(), nn::Activation::tanh);
        if (hp.recurrent_dropouts.empty())
            hp.recurrent_dropouts.assign(hp.lstm_units.size(), 0.0);
        if (hp.dense_activations.empty())
            hp.dense_activations.assign(hp.dense_units.size(), nn::Activation::relu);
        if (hp.lstm_activations.size() != hp.lstm_units.size() ||
            hp.recurrent_dropouts.size() != hp.lstm_units.size())
            v.fail("pin: per-layer lists must match pin.lstm_units length");
        if (hp.dense_activations.size() != hp.dense_units.size())
            v.fail("pin: dense activation list must match pin.dense_units length");
        plan.pinned = std::move(hp);
    }

    if (!v.errors.empty()) {
        std::string message = "invalid config:";
        for (const auto& e : v.errors) message += "\n  - " + e;
        throw config_error(message);
    }
    return cfg;
}

}  // namespace volcast::cli
