#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "wirenet/pmf.hpp"
#include "wirenet/rng.hpp"

using namespace wirenet;
using Catch::Approx;

namespace {

Pmf random_pmf(RngStream& rng, std::size_t k) {
    std::vector<double> v(k);
    double sum = 0.0;
    for (double& x : v) {
        x = -std::log(rng.next_unit_pos());
        sum += x;
    }
    for (double& x : v) x /= sum;
    double resum = 0.0;
    for (double x : v) resum += x;
    v[0] += 1.0 - resum;
    return Pmf(std::move(v));
}

JointPmf dsbs(double rho) {
    const double d = (1.0 - rho) / 2.0, o = rho / 2.0;
    return JointPmf(2, 2, {d, o, o, d});
}

}  // namespace

TEST_CASE("Pmf validation") {
    REQUIRE_THROWS_AS(Pmf({0.5, 0.6}), std::invalid_argument);
    REQUIRE_THROWS_AS(Pmf({-0.1, 1.1}), std::invalid_argument);
    REQUIRE_THROWS_AS(Pmf(std::vector<double>{}), std::invalid_argument);
    REQUIRE_NOTHROW(Pmf({0.3, 0.7}));
    // Inputs outside the 1e-12 normalization tolerance are rejected, not fixed.
    REQUIRE_THROWS_AS(Pmf({0.5, 0.5 + 1e-9}), std::invalid_argument);
    REQUIRE_NOTHROW(Pmf({0.5, 0.5 + 1e-13}));
}

TEST_CASE("empirical distribution") {
    REQUIRE(empirical({0, 0, 1, 1}, 2).probs() == std::vector<double>{0.5, 0.5});
    REQUIRE(empirical({0, 0, 0}, 2).probs() == std::vector<double>{1.0, 0.0});

    const Pmf pi = empirical({0, 1, 1, 2, 2, 2}, 3);
    REQUIRE(pi[0] == Approx(1.0 / 6).epsilon(1e-14));
    REQUIRE(pi[1] == Approx(2.0 / 6).epsilon(1e-14));
    REQUIRE(pi[2] == Approx(3.0 / 6).epsilon(1e-14));

    REQUIRE_THROWS_AS(empirical({}, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(empirical({0, 2}, 2), std::invalid_argument);
}

TEST_CASE("joint empirical distribution") {
    const JointPmf diag = joint_empirical({0, 1}, {0, 1}, 2, 2);
    REQUIRE(diag.at(0, 0) == 0.5);
    REQUIRE(diag.at(1, 1) == 0.5);
    REQUIRE(diag.at(0, 1) == 0.0);

    const JointPmf one = joint_empirical({0, 0}, {1, 1}, 2, 2);
    REQUIRE(one.at(0, 1) == 1.0);

    const JointPmf unif = joint_empirical({0, 1, 0, 1}, {0, 0, 1, 1}, 2, 2);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) REQUIRE(unif.at(x, y) == 0.25);

    REQUIRE_THROWS_AS(joint_empirical({0, 1}, {0}, 2, 2), std::invalid_argument);
}

TEST_CASE("joint empirical marginal consistency (property)") {
    RngStream rng(0xA11CE);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng.next_below(64);
        Sequence xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = static_cast<Symbol>(rng.next_below(3));
            ys[i] = static_cast<Symbol>(rng.next_below(4));
        }
        const JointPmf j = joint_empirical(xs, ys, 3, 4);
        const Pmf mx = j.marginal_x(), my = j.marginal_y();
        const Pmf ex = empirical(xs, 3), ey = empirical(ys, 4);
        for (std::size_t x = 0; x < 3; ++x) REQUIRE(mx[x] == Approx(ex[x]).margin(1e-12));
        for (std::size_t y = 0; y < 4; ++y) REQUIRE(my[y] == Approx(ey[y]).margin(1e-12));
    }
}

TEST_CASE("total variation") {
    REQUIRE(total_variation(Pmf({0.3, 0.7}), Pmf({0.3, 0.7})) == 0.0);
    REQUIRE(total_variation(Pmf({1.0, 0.0}), Pmf({0.0, 1.0})) == 1.0);
    REQUIRE(total_variation(Pmf({0.5, 0.5}), Pmf({0.6, 0.4})) == Approx(0.1).margin(1e-12));
    REQUIRE_THROWS_AS(total_variation(Pmf({1.0}), Pmf({0.5, 0.5})), std::invalid_argument);
}

TEST_CASE("total variation symmetry and triangle inequality (property)") {
    RngStream rng(0xBEEF);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t k = 2 + rng.next_below(5);
        const Pmf p = random_pmf(rng, k), q = random_pmf(rng, k), r = random_pmf(rng, k);
        const double pq = total_variation(p, q);
        REQUIRE(pq >= 0.0);
        REQUIRE(pq <= 1.0);
        REQUIRE(pq == Approx(total_variation(q, p)).margin(1e-15));
        REQUIRE(pq <= total_variation(p, r) + total_variation(r, q) + 1e-12);
    }
}

TEST_CASE("entropy") {
    REQUIRE(entropy(Pmf({1.0, 0.0})) == 0.0);
    REQUIRE(entropy(Pmf({0.5, 0.5})) == Approx(1.0).margin(1e-12));
    REQUIRE(entropy(Pmf({0.9, 0.1})) == Approx(0.468996).margin(5e-7));
    REQUIRE(entropy(Pmf({0.9, 0.1})) == Approx(oracle::h2(0.1)).margin(1e-12));
}

TEST_CASE("entropy bounded by log alphabet size, equality iff uniform (property)") {
    RngStream rng(0xE27);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t k = 2 + rng.next_below(6);
        const Pmf p = random_pmf(rng, k);
        const double h = entropy(p);
        REQUIRE(h <= std::log2(double(k)) + 1e-9);
        REQUIRE(h >= 0.0);
    }
    REQUIRE(entropy(Pmf::uniform(5)) == Approx(std::log2(5.0)).margin(1e-9));
    // Non-uniform stays measurably below the log bound.
    REQUIRE(entropy(Pmf({0.4, 0.2, 0.2, 0.2})) < 2.0 - 1e-9);
}

TEST_CASE("mutual information") {
    const Pmf u2 = Pmf::uniform(2);
    REQUIRE(mutual_information(JointPmf::product(u2, u2)) == Approx(0.0).margin(1e-12));
    REQUIRE(mutual_information(dsbs(0.0)) == Approx(1.0).margin(1e-12));
    // Uniform input through BSC(0.1): I = 1 - h2(0.1).
    const JointPmf bsc_joint(2, 2, {0.45, 0.05, 0.05, 0.45});
    REQUIRE(mutual_information(bsc_joint) == Approx(0.531004).margin(5e-7));
    REQUIRE(mutual_information(bsc_joint) == Approx(1.0 - oracle::h2(0.1)).margin(1e-12));
}

TEST_CASE("mutual information nonnegative (property)") {
    RngStream rng(0x31337);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> v(6);
        double sum = 0.0;
        for (double& x : v) {
            x = -std::log(rng.next_unit_pos());
            sum += x;
        }
        for (double& x : v) x /= sum;
        double resum = 0.0;
        for (double x : v) resum += x;
        v[0] += 1.0 - resum;
        REQUIRE(mutual_information(JointPmf(2, 3, v)) >= 0.0);
    }
    // Exactly zero on product laws.
    const Pmf p({0.2, 0.8}), q({0.1, 0.6, 0.3});
    REQUIRE(mutual_information(JointPmf::product(p, q)) <= 1e-12);
}

TEST_CASE("conditional entropy") {
    REQUIRE(conditional_entropy(dsbs(0.0)) == Approx(0.0).margin(1e-12));
    const Pmf u2 = Pmf::uniform(2);
    REQUIRE(conditional_entropy(JointPmf::product(u2, u2)) == Approx(1.0).margin(1e-12));
    REQUIRE(conditional_entropy(dsbs(0.1)) == Approx(0.468996).margin(5e-7));
    REQUIRE(conditional_entropy(dsbs(0.1)) == Approx(oracle::h2(0.1)).margin(1e-12));
}

TEST_CASE("binary entropy inverse") {
    for (double p : {0.01, 0.05, 0.11, 0.25, 0.49}) {
        REQUIRE(binary_entropy_inverse(binary_entropy(p)) == Approx(p).margin(1e-10));
    }
    REQUIRE(binary_entropy_inverse(0.0) == 0.0);
    REQUIRE(binary_entropy_inverse(1.0) == Approx(0.5).margin(1e-10));
}
