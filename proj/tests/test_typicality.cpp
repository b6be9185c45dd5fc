#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "oracles.hpp"
#include "wirenet/rng.hpp"
#include "wirenet/typicality.hpp"

using namespace wirenet;
using Catch::Approx;

namespace {

JointPmf dsbs(double rho) {
    const double d = (1.0 - rho) / 2.0, o = rho / 2.0;
    return JointPmf(2, 2, {d, o, o, d});
}

Sequence sample_iid(const Pmf& p, std::size_t n, RngStream& rng) {
    Sequence xs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = static_cast<Symbol>(rng.next_index(p.probs()));
    return xs;
}

}  // namespace

TEST_CASE("is_typical basics") {
    const Pmf p({0.5, 0.5});
    // Empirical distribution exactly equal to p: typical for any eps.
    REQUIRE(is_typical({0, 1, 0, 1}, p, 1e-9));
    // A zero-probability symbol forces rejection.
    REQUIRE_FALSE(is_typical({0, 0, 1}, Pmf({1.0, 0.0}), 0.5));
    // n=10, six ones, eps=0.1: |0.6-0.5| = 0.1 > 0.05.
    REQUIRE_FALSE(is_typical({1, 1, 1, 1, 1, 1, 0, 0, 0, 0}, p, 0.1));
    // Boundary case lands inside: n=20, k=11, |11-10| = 1 <= 0.1*10.
    Sequence xs(20, 0);
    for (int i = 0; i < 11; ++i) xs[static_cast<std::size_t>(i)] = 1;
    REQUIRE(is_typical(xs, p, 0.1));
    REQUIRE_THROWS_AS(is_typical({}, p, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(is_typical({0}, p, 0.0), std::invalid_argument);
}

TEST_CASE("is_jointly_typical basics") {
    const JointPmf j = dsbs(0.1);
    Sequence xs, ys;
    // Composition matched exactly to j at n=20: 9 of each diagonal pair, 1 of each off pair.
    for (int i = 0; i < 9; ++i) {
        xs.push_back(0);
        ys.push_back(0);
        xs.push_back(1);
        ys.push_back(1);
    }
    xs.push_back(0);
    ys.push_back(1);
    xs.push_back(1);
    ys.push_back(0);
    REQUIRE(is_jointly_typical(xs, ys, j, 1e-9));

    // Any pair hitting a zero-probability cell is rejected.
    const JointPmf diag = dsbs(0.0);
    REQUIRE_FALSE(is_jointly_typical({0, 1}, {1, 1}, diag, 2.0));

    REQUIRE_THROWS_AS(is_jointly_typical({0}, {0, 1}, j, 0.1), std::invalid_argument);
}

TEST_CASE("joint typicality acceptance probability at n=20, eps=0.5") {
    // Diagonal coupling: acceptance = P(Bin(20, 1/2) in [5, 15]) = 0.988182...
    const JointPmf j = dsbs(0.0);
    const int trials = 20000;
    RngStream rng(0x7AC1);
    int accepted = 0;
    for (int t = 0; t < trials; ++t) {
        Sequence xs(20);
        for (auto& s : xs) s = static_cast<Symbol>(rng.next_below(2));
        if (is_jointly_typical(xs, xs, j, 0.5)) ++accepted;
    }
    const double rate = double(accepted) / trials;
    // Analytic value via binomial sums.
    double p_in = 0.0;
    for (int k = 5; k <= 15; ++k) {
        double logc = std::lgamma(21.0) - std::lgamma(k + 1.0) - std::lgamma(21.0 - k);
        p_in += std::exp(logc - 20.0 * std::log(2.0));
    }
    REQUIRE(p_in == Approx(0.988182).margin(2e-6));
    REQUIRE(rate >= 0.9);
    REQUIRE(rate == Approx(p_in).margin(3.5 * std::sqrt(p_in * (1 - p_in) / trials)));
}

TEST_CASE("typical rejection rate is small at n=1e4, eps=0.1") {
    // Law of large numbers check; locked after an oracle run with pmfs whose
    // smallest mass is 0.1 (at min-probability 0.05 the per-symbol band is
    // only ~2.3 sigma wide and the rate exceeds 1%).
    const std::vector<Pmf> pmfs = {Pmf({0.5, 0.5}), Pmf({0.1, 0.2, 0.7}), Pmf::uniform(4)};
    RngStream rng(0x11AA);
    for (const Pmf& p : pmfs) {
        const int trials = 1500;
        int rejected = 0;
        for (int t = 0; t < trials; ++t) {
            const Sequence xs = sample_iid(p, 10000, rng);
            if (!is_typical(xs, p, 0.1)) ++rejected;
        }
        REQUIRE(double(rejected) / trials < 0.01);
    }
}

TEST_CASE("count band agrees with the cell predicate") {
    RngStream rng(0xBA2D);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 1 + rng.next_below(60);
        const double p = rng.next_unit();
        const double eps = 0.05 + 2.0 * rng.next_unit();
        const CountBand b = typical_count_band(n, p, eps);
        for (std::size_t k = 0; k <= n; ++k) {
            const bool in_band = !b.empty && k >= b.lo && k <= b.hi;
            REQUIRE(in_band == within_typical_cell(k, n, p, eps));
        }
    }
}

TEST_CASE("conditional typical shell enumeration matches brute force") {
    const JointPmf j = dsbs(0.25);
    RngStream rng(0x5E11);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 8;
        Sequence ys(n);
        for (auto& s : ys) s = static_cast<Symbol>(rng.next_below(2));
        const double eps = 0.3 + 1.5 * rng.next_unit();

        std::set<Sequence> brute;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            Sequence xs(n);
            for (std::size_t i = 0; i < n; ++i) xs[i] = (mask >> i) & 1u;
            if (is_jointly_typical(xs, ys, j, eps)) brute.insert(xs);
        }

        std::set<Sequence> walked;
        for_each_conditionally_typical(ys, j, eps, [&](const Sequence& xs) {
            walked.insert(xs);
            return true;
        });
        REQUIRE(walked == brute);
    }
}

TEST_CASE("shell enumeration early stop and budget") {
    const JointPmf j = dsbs(0.25);
    Sequence ys(8, 0);
    int seen = 0;
    for_each_conditionally_typical(ys, j, 3.0, [&](const Sequence&) {
        ++seen;
        return seen < 3;
    });
    REQUIRE(seen == 3);
    REQUIRE_THROWS_AS(
        for_each_conditionally_typical(ys, j, 3.0, [](const Sequence&) { return true; },
                                       /*budget=*/2),
        resource_error);
}
