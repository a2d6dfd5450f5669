#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qcov/covariance.hpp"
#include "qcov/error.hpp"

using namespace qcov;

TEST_CASE("mean_vector and outer") {
    CHECK(mean_vector(Matrix{{1, 1}, {3, 3}}) == std::vector<double>{2, 2});
    CHECK(mean_vector(Matrix{{4, -2, 7}}) == std::vector<double>{4, -2, 7});
    CHECK(outer({1, 2}) == Matrix{{1, 2}, {2, 4}});
    CHECK_THROWS(mean_vector(Matrix(0, 3)));
}

TEST_CASE("quantum_covariance examples") {
    CHECK(quantum_covariance(Matrix{{1, 0}}) == Matrix{{1, 0}, {0, 0}});
    CHECK(quantum_covariance(Matrix{{1, 0}, {0, 1}}) == Matrix{{0.5, 0}, {0, 0.5}});
    CHECK_THROWS_AS(quantum_covariance(Matrix{{1, 1}}), InvalidArgument);

    std::mt19937_64 rng(37);
    const auto x = oracle::unit_rows(oracle::random_matrix(37, 5, rng));
    CHECK(max_abs_diff(quantum_covariance(x), oracle::second_moment(x)) <= 1e-13);
}

TEST_CASE("classical_covariance examples") {
    CHECK(classical_covariance(Matrix{{1, 2}, {1, 2}, {1, 2}}) == Matrix(2, 2, 0.0));
    CHECK(classical_covariance(Matrix{{1, 0}, {-1, 0}}) == Matrix{{1, 0}, {0, 0}});

    std::mt19937_64 rng(40);
    const auto raw = oracle::random_matrix(40, 6, rng, -3, 5);
    CHECK(max_abs_diff(classical_covariance(raw), oracle::covariance(raw)) <= 1e-12);
    const auto x = oracle::unit_rows(raw);
    const auto mu = mean_vector(x);
    Matrix expect = quantum_covariance(x);
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) expect(a, b) -= mu[a] * mu[b];
    CHECK(max_abs_diff(classical_covariance(x), expect) <= 1e-12);
}

TEST_CASE("build_pair invariants on random unit data") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 2 + rng() % 80, n = 2 + rng() % 12;
        const auto x = oracle::unit_rows(oracle::random_matrix(m, n, rng, -0.3, 1.0));
        const auto p = build_pair(x);
        CHECK(p.sample_count == m);
        CHECK(asymmetry(p.q) == 0.0);
        CHECK(asymmetry(p.rho_bar) == 0.0);
        CHECK(std::abs(trace(p.rho_bar) - 1.0) <= 1e-10);
        Matrix diff = p.rho_bar;
        for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= p.m_outer.data()[i];
        CHECK(max_abs_diff(p.q, diff) <= 1e-10);
        const auto ev = oracle::symmetric_eigenvalues(p.rho_bar);
        CHECK(ev.back() >= -1e-10);
        const auto mev = oracle::symmetric_eigenvalues(p.m_outer);
        CHECK(std::abs(mev[1]) <= 1e-10 * std::max(mev[0], 1e-300) + 1e-15);
        for (int probe = 0; probe < 50; ++probe) {
            const auto v = oracle::random_matrix(1, n, rng);
            double s = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) s += v(0, a) * p.rho_bar(a, b) * v(0, b);
            CHECK(s >= -1e-10);
        }
    }
}

TEST_CASE("build_pair special cases") {
    const auto single = build_pair(Matrix{{0.6, 0.8}});
    CHECK(max_abs(single.q) <= 1e-16);
    CHECK(max_abs_diff(single.rho_bar, Matrix{{0.36, 0.48}, {0.48, 0.64}}) <= 1e-15);

    // centered unit data: Q and rho_bar agree
    const double r = std::sqrt(0.5);
    const auto centered = build_pair(Matrix{{1, 0}, {-1, 0}, {r, r}, {-r, -r}});
    CHECK(centered.mu_norm() <= 1e-16);
    CHECK(max_abs_diff(centered.q, centered.rho_bar) <= 1e-12);
}

TEST_CASE("quantum_covariance ignores sample order") {
    std::mt19937_64 rng(5);
    const auto x = oracle::unit_rows(oracle::random_matrix(50, 7, rng));
    std::vector<std::size_t> idx(50);
    for (std::size_t i = 0; i < 50; ++i) idx[i] = (i * 17 + 3) % 50;
    CHECK(max_abs_diff(quantum_covariance(x), quantum_covariance(x.select_rows(idx))) <= 1e-12);
}
