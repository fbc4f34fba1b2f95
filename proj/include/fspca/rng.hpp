#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fspca {

/// Deterministic random source used everywhere a seed appears.
///
/// The engine is std::mt19937_64, which the C++ standard pins bit-for-bit.
/// All transforms on top of the raw 64-bit stream are implemented here rather
/// than with std::*_distribution (whose output is implementation-defined), so
/// a seed reproduces the same stream on any platform:
///   - uniform01: take the top 53 bits, scale by 2^-53  -> [0, 1)
///   - gaussian:  Box-Muller on a pair of uniforms, second value cached
///   - uniform_index(n): rejection sampling on the raw stream (unbiased)
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal draw (Box-Muller).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform integer in [0, n), unbiased.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return draw % n;
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fspca
