#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace songsieve {

/// Default seed used by every randomized stage unless the config overrides it.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Seeded random source with implementation-pinned distributions.
///
/// std::mt19937_64 output is specified by the standard, but the standard
/// distributions are not; uniform and gaussian draws are derived here directly
/// from the engine so that identical seeds give identical streams on every
/// platform and toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01() {
        // 53 random bits -> uniform double on [0,1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Standard normal deviate (Box-Muller, cached pair).
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        // u1 == 0 would blow up the log
        while (u1 <= 0.0) u1 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace songsieve
