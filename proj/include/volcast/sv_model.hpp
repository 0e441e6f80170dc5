#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "volcast/series.hpp"

namespace volcast::sv {

struct SvParams {
    double mu = 0.0;        // long-run mean of log-volatility
    double phi = 0.0;       // persistence, |phi| < 1
    double sigma_eta = 0.0; // volatility of volatility, > 0
};

struct SamplerConfig {
    int n_iter = 1000;
    int n_burnin = 200;
    int thin = 1;  // retain every thin-th post-burn-in draw

    // Weakly informative defaults: mu ~ N(0, 100), (phi+1)/2 ~ Beta(5, 1.5),
    // sigma_eta^2 ~ Gamma(1/2, rate 1/2).
    double prior_mu_mean = 0.0;
    double prior_mu_var = 100.0;
    double prior_phi_a = 5.0;
    double prior_phi_b = 1.5;
    double prior_sigma2_shape = 0.5;
    double prior_sigma2_rate = 0.5;
};

struct SvPosterior {
    std::vector<SvParams> draws;
    std::vector<std::vector<double>> h_paths;  // per draw, h_0..h_T
    int n_burnin = 0;
    int n_retained = 0;

    // Accepted-move counts, part of the reproducibility surface.
    std::uint64_t h_accepts = 0;
    std::uint64_t phi_accepts = 0;
    std::uint64_t sigma_accepts = 0;
};

struct SvForecast {
    Date date;  // target date (t+1)
    double median_vol = 0.0;
    std::vector<std::pair<double, double>> quantiles;  // (level, vol), sorted
};

// Single-site Metropolis-within-Gibbs sampler for the latent-volatility
// state space: y_t | h_t ~ N(0, e^{h_t}), h_t an AR(1) around mu with
// innovation scale sigma_eta, stationary initial state. Zero returns are
// nudged to +-1e-10 (alternating sign) before likelihood evaluation.
// Deterministic for a fixed seed.
SvPosterior sample_posterior(const std::vector<double>& returns,
                             const SamplerConfig& config, std::uint64_t seed);
SvPosterior sample_posterior(const std::vector<double>& returns, int n_iter,
                             int n_burnin, std::uint64_t seed);

// For each retained draw, simulates the next latent state and transforms to
// volatility sqrt(e^h). The median and any requested quantiles are
// inverse-ECDF order statistics, so monotone transforms commute with them.
// The date field is left to the caller.
SvForecast forecast_one_step(const SvPosterior& posterior, std::uint64_t seed,
                             const std::vector<double>& quantile_levels = {});

// One-step-ahead forecasts over a rolling training window: the forecast
// dated r.dates[k + train_len] is fitted on returns [k, k + train_len).
// Window fits are independent; each derives its seed from (seed, window).
// The default entry point runs windows concurrently, the serial variant is
// the reference implementation, and both produce identical output.
std::vector<SvForecast> rolling_sv_forecast(const ReturnSeries& returns,
                                            int train_len,
                                            const SamplerConfig& config,
                                            std::uint64_t seed,
                                            const std::vector<double>& quantile_levels = {});
std::vector<SvForecast> rolling_sv_forecast_serial(
    const ReturnSeries& returns, int train_len, const SamplerConfig& config,
    std::uint64_t seed, const std::vector<double>& quantile_levels = {});

// Simulates returns (and the latent path) from the generative model.
struct SvSimulation {
    std::vector<double> returns;  // y_1..y_T
    std::vector<double> h;        // h_0..h_T
};
SvSimulation simulate_sv(const SvParams& params, std::size_t length,
                         std::uint64_t seed);

void write_forecast_csv(const std::string& path,
                        const std::vector<SvForecast>& forecasts);

}  // namespace volcast::sv
