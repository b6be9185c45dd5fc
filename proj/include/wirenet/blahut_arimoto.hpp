#pragma once

// Alternating-minimization solvers for the single-letter quantities used by
// the rest of the toolkit: channel capacity C = max_p I(X;Y) (optionally under
// an input cost budget) and the rate-distortion function
// R(D) = min_{p(u_hat|u): E d <= D} I(U;U_hat).
//
// Capacity iterations certify a duality gap each round: with
// D_x = KL(W(.|x) || q), the current input law gives the lower bound
// sum_x p(x) D_x and max_x D_x is an upper bound, so the solver stops exactly
// when the bracket is narrower than the requested tolerance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "wirenet/channel.hpp"
#include "wirenet/pmf.hpp"

namespace wirenet {

/// Thrown when an iterative solver exhausts its budget; carries the best
/// iterate so callers can inspect how far it got.
class convergence_error : public std::runtime_error {
  public:
    convergence_error(const std::string& what, double best_value, double gap, std::size_t iterations)
        : std::runtime_error(what), best_value(best_value), gap(gap), iterations(iterations) {}

    double best_value;      // bits
    double gap;             // certified bound width, bits
    std::size_t iterations;
};

struct CapacityResult {
    double capacity = 0.0;  // bits per channel use (certified lower bound)
    Pmf optimal_input;
    std::size_t iterations = 0;
    double gap = 0.0;       // upper bound minus lower bound, bits
};

namespace detail {

constexpr double kLn2 = 0.6931471805599453;

// Shared state for the capacity iterations: caches w*log(w) row sums so each
// iteration only takes log of the output marginal.
struct BaWorkspace {
    explicit BaWorkspace(const Dmc& ch) : ch(ch), nx(ch.input_size()), ny(ch.output_size()) {
        wlogw_row.assign(nx, 0.0);
        for (std::size_t x = 0; x < nx; ++x) {
            double s = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                const double w = ch.at(x, y);
                if (w > 0.0) s += w * std::log(w);
            }
            wlogw_row[x] = s;
        }
    }

    // q = p W; logq; then D_x = sum_y w log(w/q) = wlogw_row[x] - sum_y w log q.
    void divergences(const std::vector<double>& p, std::vector<double>& d) {
        q.assign(ny, 0.0);
        for (std::size_t x = 0; x < nx; ++x) {
            if (p[x] == 0.0) continue;
            for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * ch.at(x, y);
        }
        logq.resize(ny);
        for (std::size_t y = 0; y < ny; ++y) logq[y] = q[y] > 0.0 ? std::log(q[y]) : 0.0;
        d.assign(nx, 0.0);
        for (std::size_t x = 0; x < nx; ++x) {
            double s = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                const double w = ch.at(x, y);
                if (w > 0.0) s += w * logq[y];
            }
            d[x] = wlogw_row[x] - s;
        }
    }

    const Dmc& ch;
    std::size_t nx, ny;
    std::vector<double> wlogw_row, q, logq;
};

// KL(W(.|x) || q) in nats for every input row.
inline void row_divergences(const Dmc& ch, const std::vector<double>& q, std::vector<double>& d) {
    const std::size_t nx = ch.input_size(), ny = ch.output_size();
    d.assign(nx, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
            const double w = ch.at(x, y);
            if (w > 0.0) s += w * std::log(w / q[y]);
        }
        d[x] = s;
    }
}

inline void output_marginal(const Dmc& ch, const std::vector<double>& p, std::vector<double>& q) {
    const std::size_t nx = ch.input_size(), ny = ch.output_size();
    q.assign(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
        if (p[x] == 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * ch.at(x, y);
    }
}

inline Pmf to_pmf(std::vector<double> p) {
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
    double resum = 0.0;
    for (double v : p) resum += v;
    p[0] += 1.0 - resum;
    return Pmf(std::move(p));
}

}  // namespace detail

/// Capacity with an optional linear input cost constraint E[cost(X)] <= budget
/// (pass empty cost for the unconstrained problem). Lagrangian-dual bisection
/// over the multiplier with a certified bracket at the solution.
inline CapacityResult ba_capacity_constrained(const Dmc& ch, const std::vector<double>& cost,
                                              double budget, double tol = 1e-9,
                                              std::size_t max_iter = 100000,
                                              std::vector<double>* lower_trace = nullptr,
                                              double cert_tol = 1e-4) {
    if (!(tol > 0.0)) throw std::invalid_argument("ba_capacity: tol must be positive");
    const std::size_t nx = ch.input_size();
    const bool constrained = !cost.empty();
    if (constrained && cost.size() != nx)
        throw std::invalid_argument("ba_capacity: cost vector size mismatch");

    detail::BaWorkspace ws(ch);

    // Inner solver: maximize I(p) - s * E_p[cost] by Blahut iterations.
    // Returns (lower bound nats, dual upper bound nats, E[cost], iterations).
    auto solve_for_multiplier = [&](double s, std::vector<double>& p, double inner_tol,
                                    std::size_t budget_iters, std::size_t& used) {
        std::vector<double> d;
        double lower = 0.0, upper = 0.0, mean_cost = 0.0;
        used = 0;
        for (std::size_t it = 0; it < budget_iters; ++it) {
            ws.divergences(p, d);
            double lo = 0.0, hi = -1e300, ec = 0.0;
            for (std::size_t x = 0; x < nx; ++x) {
                const double cx = constrained ? cost[x] : 0.0;
                lo += p[x] * (d[x] - s * cx);
                hi = std::max(hi, d[x] - s * cx);
                ec += p[x] * cx;
            }
            lower = lo;
            upper = hi;
            mean_cost = ec;
            ++used;
            if (lower_trace) lower_trace->push_back(lo / detail::kLn2);
            if (upper - lower <= inner_tol) break;
            // Multiplicative update, normalized.
            double z = 0.0;
            for (std::size_t x = 0; x < nx; ++x) {
                p[x] *= std::exp(d[x] - s * (constrained ? cost[x] : 0.0) - upper);
                z += p[x];
            }
            for (std::size_t x = 0; x < nx; ++x) p[x] /= z;
        }
        return std::tuple<double, double, double>(lower, upper, mean_cost);
    };

    const double tol_nats = tol * detail::kLn2;
    std::vector<double> p(nx, 1.0 / static_cast<double>(nx));
    std::size_t used = 0, total_used = 0;

    if (!constrained) {
        auto [lower, upper, ec] = solve_for_multiplier(0.0, p, tol_nats, max_iter, used);
        (void)ec;
        CapacityResult r;
        r.capacity = lower / detail::kLn2;
        r.gap = (upper - lower) / detail::kLn2;
        r.iterations = used;
        r.optimal_input = detail::to_pmf(p);
        if (r.gap > tol)
            throw convergence_error("ba_capacity: iteration budget exhausted", r.capacity, r.gap, used);
        return r;
    }

    // Exact mutual information and mean cost of an input law (for primal
    // candidates; both are plain evaluations, not iterates).
    auto primal_of = [&](const std::vector<double>& pin) {
        std::vector<double> q, dkl;
        detail::output_marginal(ch, pin, q);
        detail::row_divergences(ch, q, dkl);
        double i = 0.0, c = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            i += pin[x] * dkl[x];
            c += pin[x] * cost[x];
        }
        return std::pair<double, double>(i, c);  // nats, cost
    };

    // Probe whether the cost constraint is slack at the unconstrained optimum.
    {
        std::vector<double> p0(nx, 1.0 / static_cast<double>(nx));
        auto [lower, upper, ec] = solve_for_multiplier(0.0, p0, std::max(tol_nats, 1e-6),
                                                       std::min<std::size_t>(max_iter, 5000), used);
        (void)lower;
        (void)upper;
        total_used += used;
        if (ec <= budget + 1e-9) {
            std::vector<double> p1(nx, 1.0 / static_cast<double>(nx));
            auto [lo2, hi2, ec2] = solve_for_multiplier(0.0, p1, tol_nats, max_iter, used);
            total_used += used;
            if (ec2 <= budget + 1e-9) {
                CapacityResult r;
                r.capacity = lo2 / detail::kLn2;
                r.gap = (hi2 - lo2) / detail::kLn2;
                r.iterations = total_used;
                r.optimal_input = detail::to_pmf(p1);
                if (r.gap > tol)
                    throw convergence_error("ba_capacity: iteration budget exhausted", r.capacity,
                                            r.gap, total_used);
                return r;
            }
        }
    }

    // Bisect the multiplier until the cost constraint binds; warm-start each
    // solve from the previous iterate. The bracket only needs moderate inner
    // accuracy, the certificate below uses exact evaluations.
    double s_lo = 0.0, s_hi = 1.0;
    const double loose = std::max(tol_nats * 8.0, 1e-6);
    const std::size_t bracket_iters = std::min<std::size_t>(max_iter, 4000);
    const std::size_t polish_iters = std::min<std::size_t>(max_iter, 40000);
    std::vector<double> p_feas, p_infeas;
    double ec_feas = 0.0, ec_infeas = 0.0;
    for (int grow = 0; grow < 200; ++grow) {
        auto [lo, hi, c] = solve_for_multiplier(s_hi, p, loose, bracket_iters, used);
        (void)lo;
        (void)hi;
        total_used += used;
        if (c <= budget) {
            p_feas = p;
            ec_feas = c;
            break;
        }
        p_infeas = p;
        ec_infeas = c;
        s_lo = s_hi;
        s_hi *= 2.0;
    }
    for (int step = 0; step < 60 && s_hi - s_lo > 1e-9 * (1.0 + s_hi); ++step) {
        const double s = 0.5 * (s_lo + s_hi);
        auto [lo, hi, c] = solve_for_multiplier(s, p, loose, bracket_iters, used);
        (void)lo;
        (void)hi;
        total_used += used;
        if (c <= budget) {
            s_hi = s;
            p_feas = p;
            ec_feas = c;
        } else {
            s_lo = s;
            p_infeas = p;
            ec_infeas = c;
        }
    }
    // Polish both bracket endpoints; the mixture below interpolates them.
    if (!p_infeas.empty()) {
        std::vector<double> pi = p_infeas;
        auto [lo, hi, c] = solve_for_multiplier(s_lo, pi, std::max(tol_nats, 1e-9), polish_iters, used);
        (void)lo;
        (void)hi;
        total_used += used;
        if (c > budget) {
            p_infeas = pi;
            ec_infeas = c;
        }
    }
    {
        std::vector<double> pf = p_feas.empty() ? p : p_feas;
        auto [lo, hi, c] = solve_for_multiplier(s_hi, pf, std::max(tol_nats, 1e-9), polish_iters, used);
        (void)lo;
        (void)hi;
        total_used += used;
        if (c <= budget) {
            p_feas = pf;
            ec_feas = c;
        }
    }
    if (p_feas.empty())
        throw convergence_error("ba_capacity: no feasible iterate found", 0.0, 1.0, total_used);

    // Primal candidate: the feasible iterate, improved by mixing toward the
    // infeasible one up to the exact budget (I is concave in p).
    double primal = primal_of(p_feas).first;
    std::vector<double> p_best = p_feas;
    if (!p_infeas.empty() && ec_infeas > budget && ec_feas < budget) {
        const double lam = (budget - ec_feas) / (ec_infeas - ec_feas);
        std::vector<double> mix(nx);
        for (std::size_t x = 0; x < nx; ++x)
            mix[x] = (1.0 - lam) * p_feas[x] + lam * p_infeas[x];
        auto [im, cm] = primal_of(mix);
        if (cm <= budget + 1e-12 && im > primal) {
            primal = im;
            p_best = mix;
        }
    }

    // Dual certificate: for any output law q and any s >= 0,
    //   C(budget) <= max_x [KL(W_x||q) - s cost_x] + s * budget.
    // With q fixed to the output law of p_best this is convex piecewise linear
    // in s; minimize it by ternary search.
    std::vector<double> q, dkl;
    detail::output_marginal(ch, p_best, q);
    detail::row_divergences(ch, q, dkl);
    auto dual_at = [&](double s) {
        double hi = -1e300;
        for (std::size_t x = 0; x < nx; ++x) hi = std::max(hi, dkl[x] - s * cost[x]);
        return hi + s * budget;
    };
    double a = 0.0, b = 4.0 * (s_hi + 1.0);
    for (int it = 0; it < 300; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (dual_at(m1) < dual_at(m2))
            b = m2;
        else
            a = m1;
    }
    const double best_dual = std::min(dual_at(0.5 * (a + b)), dual_at(s_hi));

    CapacityResult r;
    r.capacity = primal / detail::kLn2;
    r.gap = std::max(0.0, (best_dual - primal) / detail::kLn2);
    r.iterations = total_used;
    r.optimal_input = detail::to_pmf(p_best);
    if (r.gap > std::max(tol, cert_tol))
        throw convergence_error("ba_capacity: constrained bisection did not certify", r.capacity,
                                r.gap, total_used);
    return r;
}

/// Channel capacity in bits per use with a certified gap <= tol.
inline CapacityResult ba_capacity(const Dmc& ch, double tol = 1e-9,
                                  std::size_t max_iter = 100000) {
    return ba_capacity_constrained(ch, {}, 0.0, tol, max_iter);
}

/// Per-letter distortion table d(u, u_hat) >= 0.
class DistortionMeasure {
  public:
    DistortionMeasure() = default;

    DistortionMeasure(std::size_t nu, std::size_t nv, std::vector<double> table)
        : nu_(nu), nv_(nv), d_(std::move(table)) {
        if (nu_ == 0 || nv_ == 0 || d_.size() != nu_ * nv_)
            throw std::invalid_argument("DistortionMeasure: shape mismatch");
        for (double v : d_)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("DistortionMeasure: entries must be finite and >= 0");
    }

    static DistortionMeasure hamming(std::size_t k) {
        std::vector<double> t(k * k, 1.0);
        for (std::size_t i = 0; i < k; ++i) t[i * k + i] = 0.0;
        return DistortionMeasure(k, k, std::move(t));
    }

    std::size_t nu() const { return nu_; }
    std::size_t nv() const { return nv_; }
    double at(std::size_t u, std::size_t v) const { return d_[u * nv_ + v]; }

    double d_max() const {
        double m = 0.0;
        for (double v : d_) m = std::max(m, v);
        return m;
    }

    /// Smallest distortion between distinct letters (square tables only).
    double d_min_offdiag() const {
        if (nu_ != nv_) throw std::invalid_argument("d_min_offdiag: table not square");
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t v = 0; v < nv_; ++v)
                if (u != v) m = std::min(m, at(u, v));
        return m;
    }

    /// d(u, v) = 0 iff u = v.
    bool faithful() const {
        if (nu_ != nv_) return false;
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t v = 0; v < nv_; ++v) {
                if (u == v && at(u, v) != 0.0) return false;
                if (u != v && !(at(u, v) > 0.0)) return false;
            }
        return true;
    }

  private:
    std::size_t nu_ = 0, nv_ = 0;
    std::vector<double> d_;
};

struct RdResult {
    double rate = 0.0;                   // bits per source symbol
    std::vector<double> test_channel;    // p(u_hat|u), row-major nu x nv
    double distortion_achieved = 0.0;
    std::size_t iterations = 0;
};

namespace detail {

// One Blahut rate-distortion solve at fixed multiplier beta >= 0 (nats).
// Returns (rate bits, distortion) for the stationary test channel.
inline std::pair<double, double> rd_at_beta(const Pmf& src, const DistortionMeasure& d,
                                            double beta, std::vector<double>& cond,
                                            std::size_t max_iter = 20000, double tol = 1e-13) {
    const std::size_t nu = src.alphabet_size(), nv = d.nv();
    std::vector<double> q(nv, 1.0 / static_cast<double>(nv));
    std::vector<double> next_q(nv), denom(nu);
    double rate = 0.0, dist = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        // cond(u,v) proportional to q(v) * exp(-beta d(u,v))
        for (std::size_t u = 0; u < nu; ++u) {
            double z = 0.0;
            for (std::size_t v = 0; v < nv; ++v) {
                const double w = q[v] * std::exp(-beta * d.at(u, v));
                cond[u * nv + v] = w;
                z += w;
            }
            denom[u] = z;
            for (std::size_t v = 0; v < nv; ++v) cond[u * nv + v] /= z;
        }
        std::fill(next_q.begin(), next_q.end(), 0.0);
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t v = 0; v < nv; ++v) next_q[v] += src[u] * cond[u * nv + v];
        double delta = 0.0;
        for (std::size_t v = 0; v < nv; ++v) delta += std::abs(next_q[v] - q[v]);
        q = next_q;
        if (delta < tol) break;
    }
    rate = 0.0;
    dist = 0.0;
    for (std::size_t u = 0; u < nu; ++u) {
        for (std::size_t v = 0; v < nv; ++v) {
            const double w = src[u] * cond[u * nv + v];
            if (w > 0.0 && q[v] > 0.0) rate += w * std::log(cond[u * nv + v] / q[v]);
            dist += w * d.at(u, v);
        }
    }
    return {std::max(0.0, rate / kLn2), dist};
}

}  // namespace detail

/// R(D): minimal rate meeting the target distortion, by a multiplier sweep
/// plus bisection. The distortion constraint is met within 1e-9; `tol`
/// applies to the returned rate.
inline RdResult ba_rate_distortion(const Pmf& src, const DistortionMeasure& d, double D_target,
                                   double tol = 1e-6, std::size_t max_iter = 20000) {
    if (src.alphabet_size() != d.nu())
        throw std::invalid_argument("ba_rate_distortion: source/measure mismatch");
    if (!(D_target >= 0.0)) throw std::invalid_argument("ba_rate_distortion: negative target");
    const std::size_t nu = d.nu(), nv = d.nv();

    // Distortion floor: best achievable at unlimited rate.
    double d_floor = 0.0;
    std::vector<std::size_t> argmin(nu, 0);
    for (std::size_t u = 0; u < nu; ++u) {
        double best = d.at(u, 0);
        for (std::size_t v = 1; v < nv; ++v)
            if (d.at(u, v) < best) {
                best = d.at(u, v);
                argmin[u] = v;
            }
        d_floor += src[u] * best;
    }
    if (D_target < d_floor - 1e-12)
        throw std::invalid_argument("ba_rate_distortion: target below the distortion floor");

    RdResult res;
    res.test_channel.assign(nu * nv, 0.0);

    // At the floor the deterministic argmin map is optimal whenever the
    // minimizer is unique per letter (always true for faithful measures,
    // where this reduces to R(0) = H(U) exactly).
    if (D_target <= d_floor + 1e-12) {
        std::vector<double> qv(nv, 0.0);
        for (std::size_t u = 0; u < nu; ++u) {
            res.test_channel[u * nv + argmin[u]] = 1.0;
            qv[argmin[u]] += src[u];
        }
        double h = 0.0;  // I(U; f(U)) = H(f(U))
        for (double p : qv)
            if (p > 0.0) h -= p * std::log2(p);
        res.rate = h;
        res.distortion_achieved = d_floor;
        res.iterations = 0;
        return res;
    }

    // Zero-rate ceiling: best constant reproduction.
    double d_ceiling = std::numeric_limits<double>::infinity();
    std::size_t best_const = 0;
    for (std::size_t v = 0; v < nv; ++v) {
        double s = 0.0;
        for (std::size_t u = 0; u < nu; ++u) s += src[u] * d.at(u, v);
        if (s < d_ceiling) {
            d_ceiling = s;
            best_const = v;
        }
    }
    if (D_target >= d_ceiling - 1e-12) {
        for (std::size_t u = 0; u < nu; ++u) res.test_channel[u * nv + best_const] = 1.0;
        res.rate = 0.0;
        res.distortion_achieved = d_ceiling;
        res.iterations = 0;
        return res;
    }

    // Distortion is nonincreasing in beta; geometric bracket then bisection.
    std::vector<double> cond(nu * nv);
    double beta_lo = 1e-6, beta_hi = 1.0;
    std::size_t iters = 0;
    const double inner_tol = std::min(1e-13, tol * 1e-7);
    auto eval = [&](double beta) {
        ++iters;
        return detail::rd_at_beta(src, d, beta, cond, max_iter, inner_tol);
    };
    while (eval(beta_hi).second > D_target && beta_hi < 1e9) beta_hi *= 2.0;
    if (beta_hi >= 1e9)
        throw convergence_error("ba_rate_distortion: multiplier bracket failed", 0.0, 1.0, iters);
    while (eval(beta_lo).second < D_target && beta_lo > 1e-12) beta_lo *= 0.5;

    double rate = 0.0, dist = 0.0;
    for (int step = 0; step < 200; ++step) {
        const double beta = 0.5 * (beta_lo + beta_hi);
        auto [r, dd] = eval(beta);
        if (dd > D_target)
            beta_lo = beta;
        else {
            beta_hi = beta;
            rate = r;
            dist = dd;
        }
        if (std::abs(dd - D_target) <= 1e-9 && dd <= D_target + 1e-9) {
            rate = r;
            dist = dd;
            break;
        }
    }
    res.rate = rate;
    res.distortion_achieved = dist;
    res.test_channel = cond;
    res.iterations = iters;
    if (dist > D_target + 1e-6)
        throw convergence_error("ba_rate_distortion: constraint not met", rate, dist - D_target,
                                iters);
    return res;
}

/// f(eps) = h(eps/d_min) + log2|U| * eps/d_min, the per-letter rate penalty
/// for patching an eps-distortion reconstruction up to a lossless one.
/// Requires eps/d_min < 1/2.
inline double f_epsilon(double eps, double d_min, std::size_t alphabet_size) {
    if (!(d_min > 0.0)) throw std::invalid_argument("f_epsilon: d_min must be positive");
    if (eps < 0.0) throw std::invalid_argument("f_epsilon: eps must be >= 0");
    if (alphabet_size < 1) throw std::invalid_argument("f_epsilon: empty alphabet");
    const double r = eps / d_min;
    if (r >= 0.5) throw std::invalid_argument("f_epsilon: requires eps < d_min/2");
    if (r == 0.0) return 0.0;
    return binary_entropy(r) + std::log2(static_cast<double>(alphabet_size)) * r;
}

/// Minimal distortion D with kappa * R(D) <= C, by bisection against
/// ba_rate_distortion. Returns the floor when the capacity already covers the
/// floor rate, and the zero-rate distortion when C = 0.
inline double separation_frontier(const Pmf& src, const DistortionMeasure& d, double C,
                                  double kappa, double tol = 1e-9) {
    if (!(kappa > 0.0)) throw std::invalid_argument("separation_frontier: kappa must be > 0");
    if (C < 0.0) throw std::invalid_argument("separation_frontier: negative capacity");
    const double budget = C / kappa;

    double d_floor = 0.0;
    for (std::size_t u = 0; u < d.nu(); ++u) {
        double best = d.at(u, 0);
        for (std::size_t v = 1; v < d.nv(); ++v) best = std::min(best, d.at(u, v));
        d_floor += src[u] * best;
    }
    double d_ceiling = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < d.nv(); ++v) {
        double s = 0.0;
        for (std::size_t u = 0; u < d.nu(); ++u) s += src[u] * d.at(u, v);
        d_ceiling = std::min(d_ceiling, s);
    }

    if (ba_rate_distortion(src, d, d_floor).rate <= budget) return d_floor;
    double lo = d_floor, hi = d_ceiling;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (ba_rate_distortion(src, d, mid).rate <= budget)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace wirenet
