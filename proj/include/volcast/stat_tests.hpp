#pragma once

#include <cstddef>
#include <vector>

namespace volcast::eval {

enum class DmLoss { squared, absolute };

struct WilcoxonResult {
    double w = 0.0;        // sum of positive-difference ranks
    double z = 0.0;        // normal approximation score
    double p_value = 0.0;  // two-sided
    std::size_t n_effective = 0;
};

struct DieboldMarianoResult {
    double statistic = 0.0;
    double p_one_sided = 0.0;  // H1: model 1 has smaller expected loss
    double p_two_sided = 0.0;
    std::size_t n_effective = 0;
    DmLoss loss_kind = DmLoss::squared;
};

double normal_cdf(double x);

// Paired signed-rank test on the error differences d_t = e1_t - e2_t.
// Exact zeros are dropped, tied magnitudes get mid-ranks, and the Z score
// uses the large-sample normal approximation without continuity correction.
// Throws numeric_error when every difference is zero.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& e1,
                                    const std::vector<double>& e2);

// Equal-accuracy test on loss differentials d_t = L(e1_t) - L(e2_t) at
// forecast horizon h. The long-run variance uses a Bartlett kernel with
// h - 1 lags (the plain sample variance at one-step horizon). The optional
// Harvey-Leybourne-Newbold correction rescales the statistic and switches
// p-values to a Student-t with n - 1 degrees of freedom.
DieboldMarianoResult diebold_mariano(const std::vector<double>& e1,
                                     const std::vector<double>& e2,
                                     DmLoss loss_kind, int horizon = 1,
                                     bool hln_correction = false);

}  // namespace volcast::eval
