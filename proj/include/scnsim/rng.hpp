#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace scnsim {

// Seed derivation used everywhere in the project. Every random decision
// (generation, policy sampling, community detection order, path sampling)
// derives from one master seed through this scheme:
//
//   child(master, stream, index) = splitmix64(splitmix64(master + GOLDEN*(stream+1)) + index)
//
// with GOLDEN = 0x9E3779B97F4A7C15. Streams are listed in SeedStream.
// The scheme is stated here so ports in other languages can reproduce the
// seed tree structurally.

constexpr std::uint64_t kSeedGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kSeedGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

enum class SeedStream : std::uint64_t {
    iteration = 0,   // per-iteration child seeds in a scenario
    generation = 1,  // synthetic network generation
    policy = 2,      // alternative-supplier sampling
    communities = 3, // node visit order in community detection
    paths = 4,       // source sampling for path-length estimates
    metrics = 5,     // metric reports (baseline and per-iteration)
};

inline std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t index = 0) {
    const auto s = static_cast<std::uint64_t>(stream);
    return splitmix64(splitmix64(master + kSeedGolden * (s + 1)) + index);
}

// mt19937_64 with hand-rolled draws. The engine's sequence is fixed by the
// C++ standard; std::uniform_*_distribution is not, so bounded draws and
// shuffles are implemented here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be >= 1.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[bounded(i)]);
        }
    }

    // First k elements of a seeded Fisher-Yates pass; order of the sample is
    // the shuffle order.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& values, std::size_t k) {
        std::vector<T> pool = values;
        if (k >= pool.size()) {
            shuffle(pool);
            return pool;
        }
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(bounded(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

    // Geometric number of failures before first success, success probability p.
    std::uint64_t geometric(double p) {
        if (p >= 1.0) return 0;
        const double u = uniform01();
        return static_cast<std::uint64_t>(std::log1p(-u) / std::log1p(-p));
    }

    // Negative binomial via sum of geometrics (integer r >= 1).
    std::uint64_t negative_binomial(std::uint64_t r, double p) {
        std::uint64_t total = 0;
        for (std::uint64_t i = 0; i < r; ++i) total += geometric(p);
        return total;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace scnsim
