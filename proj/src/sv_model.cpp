#include "volcast/sv_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "volcast/csv.hpp"
#include "volcast/errors.hpp"
#include "volcast/rng.hpp"

namespace volcast::sv {

namespace {

constexpr double kZeroReturnNudge = 1e-10;

// Inverse-ECDF quantile (lowest order statistic with ECDF >= p). Commutes
// with monotone transforms, unlike interpolating definitions.
double order_statistic_quantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    std::size_t k = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(n)));
    if (k == 0) k = 1;
    if (k > n) k = n;
    return sorted[k - 1];
}

struct SamplerState {
    std::vector<double> h;  // h_0..h_T; h[t] pairs with y[t-1] for t >= 1
    double mu = 0.0;
    double phi = 0.0;
    double sigma2 = 0.0;
};

// Log posterior terms that depend on phi (up to a constant).
double phi_log_target(double phi, const SamplerState& s,
                      const SamplerConfig& cfg) {
    if (phi <= -1.0 || phi >= 1.0) return -1e300;
    const double one_m_phi2 = 1.0 - phi * phi;
    double lt = (cfg.prior_phi_a - 1.0) * std::log1p(phi) +
                (cfg.prior_phi_b - 1.0) * std::log1p(-phi) +
                0.5 * std::log(one_m_phi2);
    const double u0 = s.h[0] - s.mu;
    lt -= one_m_phi2 * u0 * u0 / (2.0 * s.sigma2);
    double ss = 0.0;
    for (std::size_t t = 1; t < s.h.size(); ++t) {
        const double e = (s.h[t] - s.mu) - phi * (s.h[t - 1] - s.mu);
        ss += e * e;
    }
    return lt - ss / (2.0 * s.sigma2);
}

// Log posterior in x = log(sigma^2), Jacobian included.
double log_sigma2_log_target(double x, double transition_ss, std::size_t n_terms,
                             const SamplerConfig& cfg) {
    return cfg.prior_sigma2_shape * x - cfg.prior_sigma2_rate * std::exp(x) -
           0.5 * static_cast<double>(n_terms) * x -
           transition_ss * std::exp(-x) / 2.0;
}

struct AdaptiveStep {
    double value;
    int proposals = 0;
    int accepts = 0;

    void record(bool accepted) {
        ++proposals;
        if (accepted) ++accepts;
    }
    // Nudges toward the 30-45% acceptance band; called during burn-in only.
    void adapt() {
        if (proposals == 0) return;
        const double rate = static_cast<double>(accepts) / proposals;
        value *= std::exp(rate - 0.375);
        value = std::clamp(value, 1e-3, 10.0);
        proposals = 0;
        accepts = 0;
    }
};

}  // namespace

SvPosterior sample_posterior(const std::vector<double>& returns,
                             const SamplerConfig& cfg, std::uint64_t seed) {
    if (returns.size() < 50)
        throw data_error("sample_posterior: need at least 50 returns");
    if (cfg.n_burnin < 0 || cfg.n_iter <= cfg.n_burnin)
        throw data_error("sample_posterior: require n_iter > n_burnin >= 0");
    if (cfg.thin < 1) throw data_error("sample_posterior: thin must be >= 1");

    const std::size_t T = returns.size();
    bool all_zero = true;
    for (double r : returns)
        if (r != 0.0) {
            all_zero = false;
            break;
        }
    if (all_zero)
        throw data_error("sample_posterior: all-zero return series, likelihood degenerate");

    // Zero returns cannot be explained by a positive variance; nudge them.
    std::vector<double> y(returns);
    int zero_parity = 0;
    for (double& v : y)
        if (v == 0.0) v = (zero_parity++ % 2 == 0) ? kZeroReturnNudge : -kZeroReturnNudge;

    Rng rng(seed);
    SamplerState state;
    state.h.resize(T + 1);

    // Initial path: 21-day moving average of log squared returns, floored.
    {
        const double floor_log = std::log(1e-10);
        std::vector<double> raw(T);
        for (std::size_t t = 0; t < T; ++t)
            raw[t] = std::max(std::log(y[t] * y[t]), floor_log);
        const int half = 10;
        for (std::size_t t = 0; t < T; ++t) {
            const std::size_t lo = t >= static_cast<std::size_t>(half) ? t - half : 0;
            const std::size_t hi = std::min(t + half, T - 1);
            double m = 0.0;
            for (std::size_t i = lo; i <= hi; ++i) m += raw[i];
            state.h[t + 1] = m / static_cast<double>(hi - lo + 1);
        }
        state.h[0] = state.h[1];
    }
    state.mu = 0.0;
    for (std::size_t t = 1; t <= T; ++t) state.mu += state.h[t];
    state.mu /= static_cast<double>(T);
    state.phi = 0.95;
    state.sigma2 = 0.05;

    AdaptiveStep h_step{0.5};
    AdaptiveStep phi_step{0.05};
    AdaptiveStep sigma_step{0.3};
    constexpr int kAdaptBatch = 50;

    SvPosterior post;
    post.n_burnin = cfg.n_burnin;

    std::vector<double> y2(T);
    for (std::size_t t = 0; t < T; ++t) y2[t] = y[t] * y[t];

    for (int iter = 0; iter < cfg.n_iter; ++iter) {
        const double inv_2s2 = 1.0 / (2.0 * state.sigma2);
        const double sigma = std::sqrt(state.sigma2);

        // h_0 is conjugate given h_1 (time-reversed AR step).
        state.h[0] = rng.normal(state.mu + state.phi * (state.h[1] - state.mu), sigma);

        // Single-site random-walk updates for h_1..h_T.
        for (std::size_t t = 1; t <= T; ++t) {
            const double cur = state.h[t];
            const double prop = cur + h_step.value * rng.normal();
            const double m1 = state.mu + state.phi * (state.h[t - 1] - state.mu);
            auto log_target = [&](double h) {
                double lt = -0.5 * h - y2[t - 1] * std::exp(-h) * 0.5;
                const double e1 = h - m1;
                lt -= e1 * e1 * inv_2s2;
                if (t < T) {
                    const double e2 =
                        state.h[t + 1] - state.mu - state.phi * (h - state.mu);
                    lt -= e2 * e2 * inv_2s2;
                }
                return lt;
            };
            const double log_alpha = log_target(prop) - log_target(cur);
            const bool accept = std::log(1.0 - rng.uniform()) < log_alpha;
            if (accept) {
                state.h[t] = prop;
                ++post.h_accepts;
            }
            h_step.record(accept);
        }

        // mu is conjugate Gaussian given the path.
        {
            const double c = 1.0 - state.phi;
            const double prec0 = (1.0 - state.phi * state.phi) / state.sigma2;
            double precision = 1.0 / cfg.prior_mu_var + prec0 +
                               static_cast<double>(T) * c * c / state.sigma2;
            double weighted = cfg.prior_mu_mean / cfg.prior_mu_var +
                              state.h[0] * prec0;
            double trans_sum = 0.0;
            for (std::size_t t = 1; t <= T; ++t)
                trans_sum += state.h[t] - state.phi * state.h[t - 1];
            weighted += c * trans_sum / state.sigma2;
            state.mu = rng.normal(weighted / precision, std::sqrt(1.0 / precision));
        }

        // phi: random-walk Metropolis inside (-1, 1).
        {
            const double prop = state.phi + phi_step.value * rng.normal();
            const double log_alpha =
                phi_log_target(prop, state, cfg) - phi_log_target(state.phi, state, cfg);
            const bool accept = std::log(1.0 - rng.uniform()) < log_alpha;
            if (accept) {
                state.phi = prop;
                ++post.phi_accepts;
            }
            phi_step.record(accept);
        }

        // sigma^2: random-walk Metropolis on the log scale.
        {
            const double u0 = state.h[0] - state.mu;
            double ss = (1.0 - state.phi * state.phi) * u0 * u0;
            for (std::size_t t = 1; t <= T; ++t) {
                const double e =
                    (state.h[t] - state.mu) - state.phi * (state.h[t - 1] - state.mu);
                ss += e * e;
            }
            const double cur_x = std::log(state.sigma2);
            const double prop_x = cur_x + sigma_step.value * rng.normal();
            const double log_alpha =
                log_sigma2_log_target(prop_x, ss, T + 1, cfg) -
                log_sigma2_log_target(cur_x, ss, T + 1, cfg);
            const bool accept = std::log(1.0 - rng.uniform()) < log_alpha;
            if (accept) {
                state.sigma2 = std::exp(prop_x);
                ++post.sigma_accepts;
            }
            sigma_step.record(accept);
        }

        const bool in_burnin = iter < cfg.n_burnin;
        if (in_burnin && (iter + 1) % kAdaptBatch == 0) {
            h_step.adapt();
            phi_step.adapt();
            sigma_step.adapt();
        }
        if (!in_burnin && (iter - cfg.n_burnin) % cfg.thin == 0) {
            post.draws.push_back({state.mu, state.phi, std::sqrt(state.sigma2)});
            post.h_paths.push_back(state.h);
        }
    }
    post.n_retained = static_cast<int>(post.draws.size());
    return post;
}

SvPosterior sample_posterior(const std::vector<double>& returns, int n_iter,
                             int n_burnin, std::uint64_t seed) {
    SamplerConfig cfg;
    cfg.n_iter = n_iter;
    cfg.n_burnin = n_burnin;
    return sample_posterior(returns, cfg, seed);
}

SvForecast forecast_one_step(const SvPosterior& posterior, std::uint64_t seed,
                             const std::vector<double>& quantile_levels) {
    if (posterior.draws.empty())
        throw data_error("forecast_one_step: empty posterior");
    Rng rng(seed);
    std::vector<double> vols(posterior.draws.size());
    for (std::size_t i = 0; i < posterior.draws.size(); ++i) {
        const SvParams& p = posterior.draws[i];
        const double h_last = posterior.h_paths[i].back();
        const double h_next =
            p.mu + p.phi * (h_last - p.mu) + p.sigma_eta * rng.normal();
        vols[i] = std::exp(0.5 * h_next);
    }
    std::sort(vols.begin(), vols.end());
    SvForecast f;
    f.median_vol = order_statistic_quantile(vols, 0.5);
    std::vector<double> levels = quantile_levels;
    std::sort(levels.begin(), levels.end());
    for (double p : levels)
        f.quantiles.emplace_back(p, order_statistic_quantile(vols, p));
    return f;
}

namespace {

std::vector<SvForecast> rolling_impl(const ReturnSeries& returns, int train_len,
                                     const SamplerConfig& cfg, std::uint64_t seed,
                                     const std::vector<double>& levels,
                                     bool parallel) {
    if (train_len < 50)
        throw data_error("rolling_sv_forecast: train_len must be >= 50");
    if (returns.size() <= static_cast<std::size_t>(train_len))
        throw data_error("rolling_sv_forecast: series not longer than train_len");
    const std::size_t n_windows = returns.size() - static_cast<std::size_t>(train_len);
    std::vector<SvForecast> out(n_windows);

    auto fit_window = [&](std::size_t k) {
        const std::vector<double> window(
            returns.returns.begin() + static_cast<std::ptrdiff_t>(k),
            returns.returns.begin() + static_cast<std::ptrdiff_t>(k + train_len));
        const SvPosterior post =
            sample_posterior(window, cfg, derive_seed(seed, k, 1));
        out[k] = forecast_one_step(post, derive_seed(seed, k, 2), levels);
        out[k].date = returns.dates[k + static_cast<std::size_t>(train_len)];
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t k = 0; k < n_windows; ++k) fit_window(k);
    } else {
        for (std::size_t k = 0; k < n_windows; ++k) fit_window(k);
    }
    return out;
}

}  // namespace

std::vector<SvForecast> rolling_sv_forecast(const ReturnSeries& returns,
                                            int train_len,
                                            const SamplerConfig& config,
                                            std::uint64_t seed,
                                            const std::vector<double>& quantile_levels) {
    return rolling_impl(returns, train_len, config, seed, quantile_levels, true);
}

std::vector<SvForecast> rolling_sv_forecast_serial(
    const ReturnSeries& returns, int train_len, const SamplerConfig& config,
    std::uint64_t seed, const std::vector<double>& quantile_levels) {
    return rolling_impl(returns, train_len, config, seed, quantile_levels, false);
}

SvSimulation simulate_sv(const SvParams& params, std::size_t length,
                         std::uint64_t seed) {
    if (std::abs(params.phi) >= 1.0)
        throw data_error("simulate_sv: |phi| must be < 1");
    if (params.sigma_eta <= 0.0)
        throw data_error("simulate_sv: sigma_eta must be positive");
    Rng rng(seed);
    SvSimulation sim;
    sim.h.resize(length + 1);
    sim.returns.resize(length);
    sim.h[0] = rng.normal(params.mu, params.sigma_eta /
                                         std::sqrt(1.0 - params.phi * params.phi));
    for (std::size_t t = 1; t <= length; ++t) {
        sim.h[t] = params.mu + params.phi * (sim.h[t - 1] - params.mu) +
                   params.sigma_eta * rng.normal();
        sim.returns[t - 1] = std::exp(0.5 * sim.h[t]) * rng.normal();
    }
    return sim;
}

void write_forecast_csv(const std::string& path,
                        const std::vector<SvForecast>& forecasts) {
    std::ostringstream out;
    out << "date,median_vol";
    if (!forecasts.empty())
        for (const auto& [level, _] : forecasts.front().quantiles) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "q%02d", static_cast<int>(level * 100.0 + 0.5));
            out << ',' << buf;
        }
    out << '\n';
    for (const auto& f : forecasts) {
        out << format_date(f.date) << ',' << format_double(f.median_vol);
        for (const auto& [_, vol] : f.quantiles) out << ',' << format_double(vol);
        out << '\n';
    }
    write_text_file(path, out.str());
}

}  // namespace volcast::sv
