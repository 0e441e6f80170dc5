#include "volcast/stat_tests.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "volcast/errors.hpp"

namespace volcast::eval {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& e1,
                                    const std::vector<double>& e2) {
    if (e1.size() != e2.size())
        throw data_error("wilcoxon_signed_rank: length mismatch");
    std::vector<double> d;
    d.reserve(e1.size());
    for (std::size_t i = 0; i < e1.size(); ++i) {
        const double diff = e1[i] - e2[i];
        if (diff != 0.0) d.push_back(diff);
    }
    if (d.empty())
        throw numeric_error("wilcoxon_signed_rank: all differences are zero");

    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(d[a]) < std::abs(d[b]);
    });

    // Mid-ranks over tied |d|.
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }

    WilcoxonResult r;
    r.n_effective = n;
    for (std::size_t k = 0; k < n; ++k)
        if (d[k] > 0.0) r.w += rank[k];
    const double fn = static_cast<double>(n);
    const double mean_w = fn * (fn + 1.0) / 4.0;
    const double sd_w = std::sqrt(fn * (fn + 1.0) * (2.0 * fn + 1.0) / 24.0);
    r.z = (r.w - mean_w) / sd_w;
    r.p_value = 2.0 * (1.0 - normal_cdf(std::abs(r.z)));
    return r;
}

DieboldMarianoResult diebold_mariano(const std::vector<double>& e1,
                                     const std::vector<double>& e2,
                                     DmLoss loss_kind, int horizon,
                                     bool hln_correction) {
    if (e1.size() != e2.size())
        throw data_error("diebold_mariano: length mismatch");
    if (e1.size() < 10)
        throw data_error("diebold_mariano: need at least 10 observations");
    if (horizon < 1) throw data_error("diebold_mariano: horizon must be >= 1");

    const std::size_t n = e1.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l1 = loss_kind == DmLoss::squared ? e1[i] * e1[i] : std::abs(e1[i]);
        const double l2 = loss_kind == DmLoss::squared ? e2[i] * e2[i] : std::abs(e2[i]);
        d[i] = l1 - l2;
    }
    const double fn = static_cast<double>(n);
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= fn;

    // Newey-West long-run variance, Bartlett weights, lag horizon - 1.
    auto autocov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t t = lag; t < n; ++t) s += (d[t] - mean) * (d[t - lag] - mean);
        return s / fn;
    };
    double lrv = autocov(0);
    for (int k = 1; k < horizon; ++k)
        lrv += 2.0 * (1.0 - static_cast<double>(k) / static_cast<double>(horizon)) *
               autocov(static_cast<std::size_t>(k));
    if (lrv <= 0.0)
        throw numeric_error("diebold_mariano: degenerate (zero long-run variance)");

    DieboldMarianoResult r;
    r.loss_kind = loss_kind;
    r.n_effective = n;
    r.statistic = mean / std::sqrt(lrv / fn);
    if (hln_correction) {
        const double h = static_cast<double>(horizon);
        const double factor =
            std::sqrt((fn + 1.0 - 2.0 * h + h * (h - 1.0) / fn) / fn);
        r.statistic *= factor;
        boost::math::students_t dist(fn - 1.0);
        r.p_one_sided = boost::math::cdf(dist, r.statistic);
        r.p_two_sided = 2.0 * boost::math::cdf(dist, -std::abs(r.statistic));
    } else {
        r.p_one_sided = normal_cdf(r.statistic);
        r.p_two_sided = 2.0 * (1.0 - normal_cdf(std::abs(r.statistic)));
    }
    return r;
}

}  // namespace volcast::eval
