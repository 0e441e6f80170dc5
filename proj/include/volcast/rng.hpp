#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace volcast {

// Mixes a base seed with up to three stream indices so that concurrent
// workers (rolling windows, tuning trials, executions) draw from disjoint,
// reproducible streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0,
                          std::uint64_t b = 0, std::uint64_t c = 0);

// mt19937_64 engine with hand-rolled variate transforms. The standard
// library's distribution objects are implementation-defined, which would
// break fixed-seed reproducibility across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached.
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Uniform integer in [0, n). n must be positive.
    int uniform_int(int n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(static_cast<int>(i)));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace volcast
