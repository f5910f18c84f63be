#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rowsim {

/// Derives a subsystem seed from the experiment root seed. Every random
/// draw in the project flows from one root seed through this function, so
/// a manifest that records the root seed reproduces a run bit for bit.
/// The tag keeps subsystems decorrelated; the index separates repeated
/// instances (e.g. episode replicas).
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                 std::uint64_t index = 0) {
    // FNV-1a over the tag, then a splitmix64 finalizer.
    std::uint64_t h = 14695981039346656037ull;
    for (char c : tag) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 1099511628211ull;
    }
    std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (h ^ (index + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// mt19937_64 engine with hand-pinned distribution transforms. The engine's
/// output sequence is fully specified by the standard; the std distributions
/// are not, so uniform/normal are implemented here to keep logs bit-identical
/// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Marsaglia polar method; one spare value cached.
    double normal(double mean, double stddev) {
        if (stddev <= 0.0) return mean;
        return mean + stddev * standard_normal();
    }

    double standard_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_{false};
    double spare_{0.0};
};

}  // namespace rowsim
