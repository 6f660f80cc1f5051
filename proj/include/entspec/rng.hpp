#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace entspec {

// Name of the generator algorithm, recorded in generated state files so runs
// are attributable and reproducible.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

// Seeded deterministic random source. The mt19937_64 output sequence is
// fixed by the C++ standard and uniform/gaussian draws below avoid
// implementation-defined distributions, so identical seeds give identical
// streams on any conforming platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log argument or normalization weight.
    double uniform_pos() { return 1.0 - uniform(); }

    // Standard normal via the Marsaglia polar transform; caches the pair.
    double gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        has_cached_ = true;
        return u * f;
    }

    // Standard complex Gaussian: independent N(0,1) real and imaginary parts.
    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    // Uniform integer in [lo, hi] without distribution objects.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        return lo + static_cast<std::uint64_t>(uniform() * static_cast<double>(span)) % span;
    }

  private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace entspec
