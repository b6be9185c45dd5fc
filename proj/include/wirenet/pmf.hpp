#pragma once

// Finite-alphabet probability primitives: distributions over dense index
// alphabets 0..k-1, empirical distributions, entropies and total variation.
// All entropies are in bits (log base 2) and 0*log(0) := 0 throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wirenet {

using Symbol = int;
using Sequence = std::vector<Symbol>;

/// Normalization tolerance for distribution validity. Inputs outside this
/// tolerance are rejected, never silently renormalized.
inline constexpr double kPmfTolerance = 1e-12;

inline double log2_safe(double x) { return std::log2(x); }

/// Binary entropy h(p) in bits.
inline double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Inverse of binary_entropy restricted to [0, 1/2].
inline double binary_entropy_inverse(double h) {
    if (h < 0.0 || h > 1.0) throw std::invalid_argument("binary_entropy_inverse: h outside [0,1]");
    if (h == 0.0) return 0.0;
    double lo = 0.0, hi = 0.5;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (binary_entropy(mid) < h ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Probability mass function over alphabet {0,...,k-1}.
class Pmf {
  public:
    Pmf() = default;

    explicit Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
        validate();
    }

    static Pmf uniform(std::size_t k) {
        if (k == 0) throw std::invalid_argument("Pmf::uniform: empty alphabet");
        return Pmf(std::vector<double>(k, 1.0 / static_cast<double>(k)));
    }

    static Pmf point_mass(std::size_t k, std::size_t at) {
        if (at >= k) throw std::invalid_argument("Pmf::point_mass: index out of range");
        std::vector<double> v(k, 0.0);
        v[at] = 1.0;
        return Pmf(std::move(v));
    }

    std::size_t alphabet_size() const { return probs_.size(); }
    double operator[](std::size_t x) const { return probs_[x]; }
    const std::vector<double>& probs() const { return probs_; }

    double min_prob() const {
        double m = 1.0;
        for (double p : probs_) m = std::min(m, p);
        return m;
    }

  private:
    void validate() const {
        if (probs_.empty()) throw std::invalid_argument("Pmf: empty alphabet");
        double sum = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0)) throw std::invalid_argument("Pmf: negative or NaN entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kPmfTolerance)
            throw std::invalid_argument("Pmf: entries sum to " + std::to_string(sum) +
                                        ", not 1 within tolerance");
    }

    std::vector<double> probs_;
};

/// Joint distribution over {0..|X|-1} x {0..|Y|-1}, stored row-major.
class JointPmf {
  public:
    JointPmf() = default;

    JointPmf(std::size_t nx, std::size_t ny, std::vector<double> probs)
        : nx_(nx), ny_(ny), probs_(std::move(probs)) {
        if (nx_ == 0 || ny_ == 0 || probs_.size() != nx_ * ny_)
            throw std::invalid_argument("JointPmf: shape mismatch");
        double sum = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0)) throw std::invalid_argument("JointPmf: negative or NaN entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kPmfTolerance)
            throw std::invalid_argument("JointPmf: total mass not 1 within tolerance");
    }

    /// Product joint p(x)q(y).
    static JointPmf product(const Pmf& px, const Pmf& py) {
        std::vector<double> v(px.alphabet_size() * py.alphabet_size());
        for (std::size_t x = 0; x < px.alphabet_size(); ++x)
            for (std::size_t y = 0; y < py.alphabet_size(); ++y)
                v[x * py.alphabet_size() + y] = px[x] * py[y];
        return JointPmf(px.alphabet_size(), py.alphabet_size(), std::move(v));
    }

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double at(std::size_t x, std::size_t y) const { return probs_[x * ny_ + y]; }
    const std::vector<double>& probs() const { return probs_; }

    Pmf marginal_x() const {
        std::vector<double> v(nx_, 0.0);
        for (std::size_t x = 0; x < nx_; ++x)
            for (std::size_t y = 0; y < ny_; ++y) v[x] += at(x, y);
        fix_rounding(v);
        return Pmf(std::move(v));
    }

    Pmf marginal_y() const {
        std::vector<double> v(ny_, 0.0);
        for (std::size_t x = 0; x < nx_; ++x)
            for (std::size_t y = 0; y < ny_; ++y) v[y] += at(x, y);
        fix_rounding(v);
        return Pmf(std::move(v));
    }

  private:
    // Sums of validated cells can drift by a few ulp past the Pmf tolerance;
    // nudge the largest entry so the marginal stays a valid Pmf.
    static void fix_rounding(std::vector<double>& v) {
        double sum = 0.0;
        for (double p : v) sum += p;
        double err = 1.0 - sum;
        if (err != 0.0 && std::abs(err) < 16 * kPmfTolerance) {
            auto it = std::max_element(v.begin(), v.end());
            *it += err;
        }
    }

    std::size_t nx_ = 0, ny_ = 0;
    std::vector<double> probs_;
};

inline void check_symbols(const Sequence& xs, std::size_t alphabet_size, const char* who) {
    for (Symbol s : xs)
        if (s < 0 || static_cast<std::size_t>(s) >= alphabet_size)
            throw std::invalid_argument(std::string(who) + ": symbol out of range");
}

/// Empirical distribution pi(.|x^n) of a sequence.
inline Pmf empirical(const Sequence& xs, std::size_t alphabet_size) {
    if (xs.empty()) throw std::invalid_argument("empirical: empty sequence");
    check_symbols(xs, alphabet_size, "empirical");
    std::vector<double> counts(alphabet_size, 0.0);
    for (Symbol s : xs) counts[static_cast<std::size_t>(s)] += 1.0;
    const double n = static_cast<double>(xs.size());
    for (double& c : counts) c /= n;
    return Pmf(std::move(counts));
}

/// Joint empirical distribution pi(.,.|x^n,y^n); marginals match empirical()
/// of each sequence exactly.
inline JointPmf joint_empirical(const Sequence& xs, const Sequence& ys,
                                std::size_t nx, std::size_t ny) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("joint_empirical: length mismatch");
    if (xs.empty()) throw std::invalid_argument("joint_empirical: empty sequences");
    check_symbols(xs, nx, "joint_empirical");
    check_symbols(ys, ny, "joint_empirical");
    std::vector<double> counts(nx * ny, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i)
        counts[static_cast<std::size_t>(xs[i]) * ny + static_cast<std::size_t>(ys[i])] += 1.0;
    const double n = static_cast<double>(xs.size());
    for (double& c : counts) c /= n;
    return JointPmf(nx, ny, std::move(counts));
}

/// Total variation distance, 0.5 * l1.
inline double total_variation(const Pmf& p, const Pmf& q) {
    if (p.alphabet_size() != q.alphabet_size())
        throw std::invalid_argument("total_variation: alphabet mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.alphabet_size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

inline double total_variation(const JointPmf& p, const JointPmf& q) {
    if (p.nx() != q.nx() || p.ny() != q.ny())
        throw std::invalid_argument("total_variation: alphabet mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.probs().size(); ++i)
        s += std::abs(p.probs()[i] - q.probs()[i]);
    return 0.5 * s;
}

/// Shannon entropy H(p) in bits.
inline double entropy(const Pmf& p) {
    double h = 0.0;
    for (std::size_t i = 0; i < p.alphabet_size(); ++i)
        if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
    return h;
}

inline double joint_entropy(const JointPmf& j) {
    double h = 0.0;
    for (double p : j.probs())
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

/// I(X;Y) = H(X) + H(Y) - H(X,Y), clamped at 0 against rounding.
inline double mutual_information(const JointPmf& j) {
    const double i = entropy(j.marginal_x()) + entropy(j.marginal_y()) - joint_entropy(j);
    return std::max(0.0, i);
}

/// H(X|Y) = H(X,Y) - H(Y).
inline double conditional_entropy(const JointPmf& j) {
    return std::max(0.0, joint_entropy(j) - entropy(j.marginal_y()));
}

}  // namespace wirenet
