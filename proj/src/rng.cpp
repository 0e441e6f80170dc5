#include "volcast/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace volcast {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    std::uint64_t s = splitmix64(base);
    s = splitmix64(s ^ (a + 0x517cc1b727220a95ULL));
    s = splitmix64(s ^ (b + 0x2545f4914f6cdd1dULL));
    s = splitmix64(s ^ (c + 0x27d4eb2f165667c5ULL));
    return s;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

int Rng::uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<int>(x % bound);
}

}  // namespace volcast
