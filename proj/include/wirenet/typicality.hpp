#pragma once

// Strong (robust) typicality: a sequence is epsilon-typical when every symbol
// count is within a multiplicative epsilon band of its expectation,
// |pi(x|x^n) - p(x)| <= eps * p(x). Symbols with p(x) = 0 must not appear.
// Comparisons are done in count form, |k - n*p| <= eps*n*p, so that the
// predicate and the set-enumeration bounds below agree exactly.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wirenet/pmf.hpp"

namespace wirenet {

struct TypicalityParams {
    double epsilon = 0.1;
    std::size_t n = 0;  // blocklength; 0 means "taken from the sequence"

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("TypicalityParams: epsilon must be > 0");
    }
};

class resource_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline bool within_typical_cell(std::size_t count, std::size_t n, double p, double eps) {
    const double expected = static_cast<double>(n) * p;
    return std::abs(static_cast<double>(count) - expected) <= eps * expected;
}

/// Integer count band [lo, hi] compatible with within_typical_cell;
/// hi < lo means the band is empty.
struct CountBand {
    std::size_t lo = 0;
    std::size_t hi = 0;
    bool empty = false;
};

inline CountBand typical_count_band(std::size_t n, double p, double eps) {
    CountBand b;
    if (p <= 0.0) {
        b.lo = b.hi = 0;
        b.empty = false;  // only the zero count is allowed
        return b;
    }
    const double expected = static_cast<double>(n) * p;
    double lo = std::ceil(expected * (1.0 - eps) - 1e-9);
    double hi = std::floor(expected * (1.0 + eps) + 1e-9);
    long lo_i = std::max(0L, static_cast<long>(lo));
    long hi_i = std::min(static_cast<long>(n), static_cast<long>(hi));
    // Snap to the predicate at the edges in case of rounding drift.
    while (lo_i <= hi_i && !within_typical_cell(static_cast<std::size_t>(lo_i), n, p, eps)) ++lo_i;
    while (hi_i >= lo_i && !within_typical_cell(static_cast<std::size_t>(hi_i), n, p, eps)) --hi_i;
    if (lo_i > hi_i) {
        b.empty = true;
        return b;
    }
    b.lo = static_cast<std::size_t>(lo_i);
    b.hi = static_cast<std::size_t>(hi_i);
    return b;
}

inline bool is_typical(const Sequence& xs, const Pmf& p, double eps) {
    if (xs.empty()) throw std::invalid_argument("is_typical: empty sequence");
    if (!(eps > 0.0)) throw std::invalid_argument("is_typical: epsilon must be > 0");
    check_symbols(xs, p.alphabet_size(), "is_typical");
    std::vector<std::size_t> counts(p.alphabet_size(), 0);
    for (Symbol s : xs) ++counts[static_cast<std::size_t>(s)];
    for (std::size_t x = 0; x < p.alphabet_size(); ++x)
        if (!within_typical_cell(counts[x], xs.size(), p[x], eps)) return false;
    return true;
}

inline bool is_jointly_typical(const Sequence& xs, const Sequence& ys, const JointPmf& j,
                               double eps) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("is_jointly_typical: length mismatch");
    if (xs.empty()) throw std::invalid_argument("is_jointly_typical: empty sequences");
    if (!(eps > 0.0)) throw std::invalid_argument("is_jointly_typical: epsilon must be > 0");
    check_symbols(xs, j.nx(), "is_jointly_typical");
    check_symbols(ys, j.ny(), "is_jointly_typical");
    std::vector<std::size_t> counts(j.nx() * j.ny(), 0);
    for (std::size_t i = 0; i < xs.size(); ++i)
        ++counts[static_cast<std::size_t>(xs[i]) * j.ny() + static_cast<std::size_t>(ys[i])];
    for (std::size_t x = 0; x < j.nx(); ++x)
        for (std::size_t y = 0; y < j.ny(); ++y)
            if (!within_typical_cell(counts[x * j.ny() + y], xs.size(), j.at(x, y), eps))
                return false;
    return true;
}

namespace detail {

// Enumerate count vectors (k_0..k_{m-1}) with k_a in [band_a] and sum = total.
inline void enumerate_count_vectors(const std::vector<CountBand>& bands, std::size_t total,
                                    std::vector<std::size_t>& cur, std::size_t idx,
                                    const std::function<bool(const std::vector<std::size_t>&)>& fn,
                                    bool& keep_going) {
    if (!keep_going) return;
    if (idx + 1 == bands.size()) {
        const CountBand& b = bands[idx];
        if (!b.empty && total >= b.lo && total <= b.hi) {
            cur[idx] = total;
            if (!fn(cur)) keep_going = false;
        }
        return;
    }
    const CountBand& b = bands[idx];
    if (b.empty) return;
    for (std::size_t k = b.lo; k <= b.hi && k <= total; ++k) {
        cur[idx] = k;
        enumerate_count_vectors(bands, total - k, cur, idx + 1, fn, keep_going);
        if (!keep_going) return;
    }
}

// Enumerate all placements of a symbol multiset (counts per symbol) over the
// given positions of `out`, invoking fn at each complete assignment.
inline bool enumerate_arrangements(const std::vector<std::size_t>& positions,
                                   std::vector<std::size_t>& counts, Sequence& out,
                                   std::size_t depth, const std::function<bool()>& fn,
                                   std::uint64_t& budget) {
    if (depth == positions.size()) {
        if (budget == 0) throw resource_error("typical shell enumeration budget exhausted");
        --budget;
        return fn();
    }
    for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a] == 0) continue;
        --counts[a];
        out[positions[depth]] = static_cast<Symbol>(a);
        if (!enumerate_arrangements(positions, counts, out, depth + 1, fn, budget)) {
            ++counts[a];
            return false;
        }
        ++counts[a];
    }
    return true;
}

}  // namespace detail

/// Enumerates the conditional typical shell: every x^n with (x^n, y^n) jointly
/// epsilon-typical under `j`. Calls `fn` for each member; fn returning false
/// stops the walk. Throws resource_error if more than `budget` sequences would
/// be visited.
inline void for_each_conditionally_typical(
    const Sequence& ys, const JointPmf& j, double eps,
    const std::function<bool(const Sequence&)>& fn, std::uint64_t budget = (1ull << 26)) {
    if (ys.empty()) throw std::invalid_argument("for_each_conditionally_typical: empty y^n");
    if (!(eps > 0.0)) throw std::invalid_argument("for_each_conditionally_typical: epsilon must be > 0");
    check_symbols(ys, j.ny(), "for_each_conditionally_typical");
    const std::size_t n = ys.size();
    const std::size_t nx = j.nx(), ny = j.ny();

    // Positions grouped by observed y symbol.
    std::vector<std::vector<std::size_t>> class_pos(ny);
    for (std::size_t i = 0; i < n; ++i)
        class_pos[static_cast<std::size_t>(ys[i])].push_back(i);

    // Feasible count bands per (x, y) cell.
    std::vector<std::vector<CountBand>> bands(ny, std::vector<CountBand>(nx));
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 0; x < nx; ++x) bands[y][x] = typical_count_band(n, j.at(x, y), eps);

    // Per class, compute the list of admissible count vectors.
    std::vector<std::vector<std::vector<std::size_t>>> class_counts(ny);
    for (std::size_t y = 0; y < ny; ++y) {
        std::vector<std::size_t> cur(nx, 0);
        bool keep = true;
        detail::enumerate_count_vectors(
            bands[y], class_pos[y].size(), cur, 0,
            [&](const std::vector<std::size_t>& v) {
                class_counts[y].push_back(v);
                return true;
            },
            keep);
        if (class_counts[y].empty()) return;  // shell is empty
    }

    Sequence out(n, 0);
    std::uint64_t rem = budget;

    // Recurse over classes; within a class, over count vectors, then placements.
    std::function<bool(std::size_t)> walk = [&](std::size_t y) -> bool {
        if (y == ny) return fn(out);
        for (const auto& counts : class_counts[y]) {
            std::vector<std::size_t> c = counts;
            bool cont = detail::enumerate_arrangements(
                class_pos[y], c, out, 0, [&]() { return walk(y + 1); }, rem);
            if (!cont) return false;
        }
        return true;
    };
    walk(0);
}

}  // namespace wirenet
