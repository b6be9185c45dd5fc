#pragma once

// Deterministic hierarchical random streams.
//
// Every randomized construction in the toolkit draws from an RngStream that is
// derived from a 64-bit master seed plus a path (edge, layer, time, trial).
// The same (seed, path) always reproduces the identical sequence on every
// platform: the engine is std::mt19937_64 (bit-exact by the standard), doubles
// are produced from the top 53 bits, and Gaussians use the Marsaglia polar
// method so no implementation-defined std::*_distribution is involved.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace wirenet {

namespace detail {

// splitmix64 finalizer; used to hash seed/path components together.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Identifies one independent random stream: (edge, layer, time, trial).
/// Components default to 0; unused coordinates just stay 0.
struct RngPath {
    std::uint64_t edge = 0;
    std::uint64_t layer = 0;
    std::uint64_t time = 0;
    std::uint64_t trial = 0;
};

class RngStream {
  public:
    explicit RngStream(std::uint64_t master_seed, RngPath path = {})
        : master_seed_(master_seed), path_(path),
          engine_(stream_seed(master_seed, path)) {}

    /// Child stream for a sub-path. Mixing is injective enough for desk-scale
    /// path spaces; disjoint paths give statistically independent streams.
    RngStream at(RngPath p) const { return RngStream(master_seed_, p); }

    std::uint64_t master_seed() const { return master_seed_; }
    const RngPath& path() const { return path_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1): top 53 bits of the engine output.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_unit_pos() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("next_below: n must be positive");
        // Rejection to avoid modulo bias; at most a couple of iterations.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Standard normal via the Marsaglia polar method (documented choice; the
    /// rejection loop is deterministic given the stream position).
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_unit() - 1.0;
            v = 2.0 * next_unit() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    double next_gaussian(double mean, double stddev) {
        return mean + stddev * next_gaussian();
    }

    /// Index sampled from an explicit cumulative-free weight vector by CDF
    /// inversion. Weights must be nonnegative with a positive sum.
    std::size_t next_index(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw std::invalid_argument("next_index: zero weight vector");
        double u = next_unit() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    static std::uint64_t stream_seed(std::uint64_t master, RngPath p) {
        std::uint64_t h = detail::mix64(master);
        h = detail::mix64(h ^ detail::mix64(p.edge + 0x1ull));
        h = detail::mix64(h ^ detail::mix64(p.layer + 0x2ull));
        h = detail::mix64(h ^ detail::mix64(p.time + 0x3ull));
        h = detail::mix64(h ^ detail::mix64(p.trial + 0x4ull));
        return h;
    }

  private:
    std::uint64_t master_seed_;
    RngPath path_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wirenet
