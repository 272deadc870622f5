#pragma once

#include <cmath>
#include <cstdint>

namespace lassocond {

// Counter-based deterministic RNG: every (seed, counter) pair names an
// independent stream, so trial results do not depend on worker scheduling.
// SplitMix64 core.
class Rng {
  public:
    static Rng stream(std::uint64_t seed, std::uint64_t counter) {
        Rng r;
        r.state_ = mix(seed + 0x9E3779B97F4A7C15ULL * (counter + 1));
        return r;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // open interval (0,1), 52 random bits
    double uniform01() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * (1.0 / 4503599627370496.0);
    }

    double exponential() { return -std::log(uniform01()); }

    double normal(double mu = 0.0, double sigma = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mu + sigma * spare_;
        }
        double u = uniform01();
        double v = uniform01();
        double rad = std::sqrt(-2.0 * std::log(u));
        spare_ = rad * std::sin(6.283185307179586476925286766559 * v);
        have_spare_ = true;
        return mu + sigma * rad * std::cos(6.283185307179586476925286766559 * v);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace lassocond
