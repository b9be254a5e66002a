#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "homeokit/geometry.hpp"

namespace homeokit {

/// Seedable generator with distribution helpers whose output does not depend
/// on the standard library's (implementation-defined) distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (caches the second variate).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * kPi * u2);
        has_spare_ = true;
        return mag * std::cos(2.0 * kPi * u2);
    }
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream identifiers so each subsystem of a run draws from its own sequence.
enum class RngStream : std::uint64_t { kCdmInit = 1, kSensorNoise = 2, kMotion = 3 };

inline Rng make_rng(std::uint64_t seed, RngStream stream) {
    return Rng(seed, static_cast<std::uint64_t>(stream));
}

}  // namespace homeokit
