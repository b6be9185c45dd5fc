#pragma once

// Channel models: discrete memoryless channels with sampling, AWGN under a
// per-symbol power constraint, the Q[i] quantizer ladder, and discretization
// of an AWGN channel into a DMC via Gaussian cell probabilities.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wirenet/pmf.hpp"
#include "wirenet/rng.hpp"

namespace wirenet {

/// Row-stochastic transition matrix p(y|x) of one point-to-point DMC.
class Dmc {
  public:
    Dmc() = default;

    Dmc(std::size_t nx, std::size_t ny, std::vector<double> transitions)
        : nx_(nx), ny_(ny), t_(std::move(transitions)) {
        if (nx_ == 0 || ny_ == 0 || t_.size() != nx_ * ny_)
            throw std::invalid_argument("Dmc: shape mismatch");
        for (std::size_t x = 0; x < nx_; ++x) {
            double sum = 0.0;
            for (std::size_t y = 0; y < ny_; ++y) {
                if (!(t_[x * ny_ + y] >= 0.0))
                    throw std::invalid_argument("Dmc: negative or NaN entry");
                sum += t_[x * ny_ + y];
            }
            if (std::abs(sum - 1.0) > kPmfTolerance)
                throw std::invalid_argument("Dmc: row does not sum to 1 within tolerance");
        }
    }

    static Dmc identity(std::size_t k) {
        std::vector<double> t(k * k, 0.0);
        for (std::size_t i = 0; i < k; ++i) t[i * k + i] = 1.0;
        return Dmc(k, k, std::move(t));
    }

    /// Binary symmetric channel with crossover probability p.
    static Dmc bsc(double p) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("Dmc::bsc: crossover outside [0,1]");
        return Dmc(2, 2, {1.0 - p, p, p, 1.0 - p});
    }

    /// Binary erasure channel; output symbol 2 is the erasure.
    static Dmc bec(double rho) {
        if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("Dmc::bec: erasure outside [0,1]");
        return Dmc(2, 3, {1.0 - rho, 0.0, rho, 0.0, 1.0 - rho, rho});
    }

    std::size_t input_size() const { return nx_; }
    std::size_t output_size() const { return ny_; }
    double at(std::size_t x, std::size_t y) const { return t_[x * ny_ + y]; }

    std::vector<double> row(std::size_t x) const {
        return std::vector<double>(t_.begin() + static_cast<long>(x * ny_),
                                   t_.begin() + static_cast<long>((x + 1) * ny_));
    }

    Pmf row_pmf(std::size_t x) const { return Pmf(row(x)); }

    /// Output marginal under input law p.
    Pmf output_marginal(const Pmf& px) const {
        if (px.alphabet_size() != nx_)
            throw std::invalid_argument("Dmc::output_marginal: input alphabet mismatch");
        std::vector<double> q(ny_, 0.0);
        for (std::size_t x = 0; x < nx_; ++x)
            for (std::size_t y = 0; y < ny_; ++y) q[y] += px[x] * at(x, y);
        double sum = 0.0;
        for (double v : q) sum += v;
        q[0] += 1.0 - sum;  // absorb ulp drift
        return Pmf(std::move(q));
    }

    /// Joint law p(x)p(y|x).
    JointPmf joint_with_input(const Pmf& px) const {
        if (px.alphabet_size() != nx_)
            throw std::invalid_argument("Dmc::joint_with_input: input alphabet mismatch");
        std::vector<double> v(nx_ * ny_);
        for (std::size_t x = 0; x < nx_; ++x)
            for (std::size_t y = 0; y < ny_; ++y) v[x * ny_ + y] = px[x] * at(x, y);
        return JointPmf(nx_, ny_, std::move(v));
    }

  private:
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<double> t_;
};

/// Memoryless transmission: each output drawn independently from the row of
/// the corresponding input symbol. Deterministic given the stream.
inline Sequence dmc_transmit(const Dmc& ch, const Sequence& xs, RngStream& rng) {
    check_symbols(xs, ch.input_size(), "dmc_transmit");
    Sequence ys(xs.size());
    // Per-row CDFs, built once.
    std::vector<std::vector<double>> rows(ch.input_size());
    for (std::size_t x = 0; x < ch.input_size(); ++x) rows[x] = ch.row(x);
    for (std::size_t i = 0; i < xs.size(); ++i)
        ys[i] = static_cast<Symbol>(rng.next_index(rows[static_cast<std::size_t>(xs[i])]));
    return ys;
}

struct AwgnSpec {
    double input_power = 1.0;  // P
    double noise_power = 1.0;  // N

    AwgnSpec() = default;
    AwgnSpec(double P, double N) : input_power(P), noise_power(N) {
        if (!(input_power > 0.0) || !(noise_power > 0.0))
            throw std::invalid_argument("AwgnSpec: P and N must be positive");
    }
};

/// Shannon capacity of the AWGN channel, 0.5*log2(1 + P/N) bits per use.
inline double awgn_capacity(const AwgnSpec& spec) {
    return 0.5 * std::log2(1.0 + spec.input_power / spec.noise_power);
}

/// y_t = x_t + z_t with z_t iid N(0, noise_power). The per-symbol power
/// contract on x is the caller's responsibility (see check_per_symbol_power).
inline std::vector<double> awgn_transmit(const AwgnSpec& spec, const std::vector<double>& xs,
                                         RngStream& rng) {
    const double sigma = std::sqrt(spec.noise_power);
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = xs[i] + rng.next_gaussian(0.0, sigma);
    return ys;
}

/// Empirical per-symbol power check over a message ensemble: for each time
/// index, mean of x_t^2 across codewords must not exceed P. Returns the list
/// of violating positions (empty means the contract holds).
inline std::vector<std::size_t> check_per_symbol_power(
    const std::vector<std::vector<double>>& codewords, double P) {
    std::vector<std::size_t> bad;
    if (codewords.empty()) return bad;
    const std::size_t n = codewords[0].size();
    for (const auto& c : codewords)
        if (c.size() != n) throw std::invalid_argument("check_per_symbol_power: ragged codebook");
    for (std::size_t t = 0; t < n; ++t) {
        double s = 0.0;
        for (const auto& c : codewords) s += c[t] * c[t];
        if (s / static_cast<double>(codewords.size()) > P) bad.push_back(t);
    }
    return bad;
}

/// The Q[i] quantizer: step delta = 1/sqrt(i), levels {-i*delta,...,0,...,i*delta}.
/// Rounds toward zero onto the grid, so |[x]_i| <= |x| pointwise and
/// quantization never increases energy.
class Quantizer {
  public:
    explicit Quantizer(unsigned index) : i_(index) {
        if (i_ == 0) throw std::invalid_argument("Quantizer: index must be >= 1");
        delta_ = 1.0 / std::sqrt(static_cast<double>(i_));
    }

    unsigned index() const { return i_; }
    double delta() const { return delta_; }
    std::size_t level_count() const { return 2 * static_cast<std::size_t>(i_) + 1; }

    /// Level value for dense index m in 0..2i (level 0 is -i*delta).
    double level_value(std::size_t m) const {
        return (static_cast<double>(m) - static_cast<double>(i_)) * delta_;
    }

    std::vector<double> levels() const {
        std::vector<double> v(level_count());
        for (std::size_t m = 0; m < v.size(); ++m) v[m] = level_value(m);
        return v;
    }

    double quantize(double x) const {
        const double steps = std::floor(std::abs(x) / delta_);
        const double m = std::min(static_cast<double>(i_), steps);
        return (x < 0.0 ? -m : m) * delta_;
    }

    std::size_t quantize_index(double x) const {
        const double steps = std::floor(std::abs(x) / delta_);
        const long m = static_cast<long>(std::min(static_cast<double>(i_), steps));
        return static_cast<std::size_t>((x < 0.0 ? -m : m) + static_cast<long>(i_));
    }

    /// Half-open preimage interval of level index m under the toward-zero
    /// rule. Interior positive level v: [v, v+delta); negative: (v-delta, v];
    /// level 0: (-delta, delta); extreme levels absorb the tails.
    std::pair<double, double> cell(std::size_t m) const {
        const long s = static_cast<long>(m) - static_cast<long>(i_);
        const double v = static_cast<double>(s) * delta_;
        const double inf = std::numeric_limits<double>::infinity();
        if (s == 0) return {-delta_, delta_};
        if (s > 0) return {v, s == static_cast<long>(i_) ? inf : v + delta_};
        return {s == -static_cast<long>(i_) ? -inf : v - delta_, v};
    }

  private:
    unsigned i_;
    double delta_;
};

inline double gaussian_cdf(double x, double mean, double sigma) {
    return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0)));
}

/// An AWGN channel with quantized input and output: a DMC whose input alphabet
/// is the level set of Q[j] and whose output alphabet is the level set of Q[k].
struct DiscretizedAwgn {
    Dmc dmc;
    std::vector<double> input_levels;   // values of the input alphabet
    std::vector<double> output_levels;  // values of the output alphabet
};

/// Entry (u, v) is Pr{[u + Z]_k = v} for Z ~ N(0, noise_power), computed from
/// Gaussian cumulative probabilities of the Q[k] preimage cells.
inline DiscretizedAwgn discretize_awgn(const AwgnSpec& spec, unsigned j, unsigned k) {
    const Quantizer qj(j), qk(k);
    const double sigma = std::sqrt(spec.noise_power);
    const std::size_t nx = qj.level_count(), ny = qk.level_count();

    std::vector<double> t(nx * ny);
    for (std::size_t mx = 0; mx < nx; ++mx) {
        const double u = qj.level_value(mx);
        // Adjacent cells share boundaries, so each row telescopes to 1.
        for (std::size_t my = 0; my < ny; ++my) {
            const auto [lo, hi] = qk.cell(my);
            const double p_hi = std::isinf(hi) ? 1.0 : gaussian_cdf(hi, u, sigma);
            const double p_lo = std::isinf(lo) ? 0.0 : gaussian_cdf(lo, u, sigma);
            t[mx * ny + my] = std::max(0.0, p_hi - p_lo);
        }
        double sum = 0.0;
        for (std::size_t my = 0; my < ny; ++my) sum += t[mx * ny + my];
        // Absorb the few-ulp telescoping drift into the largest cell.
        double* row = &t[mx * ny];
        std::size_t arg = 0;
        for (std::size_t my = 1; my < ny; ++my)
            if (row[my] > row[arg]) arg = my;
        row[arg] += 1.0 - sum;
    }
    return DiscretizedAwgn{Dmc(nx, ny, std::move(t)), qj.levels(), qk.levels()};
}

}  // namespace wirenet
