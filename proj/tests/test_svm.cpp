#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qcov/error.hpp"
#include "qcov/svm.hpp"

using namespace qcov;

namespace {

std::vector<int> plus_minus(const std::vector<int>& labels) {
    std::vector<int> y;
    for (int l : labels) y.push_back(l == 1 ? 1 : -1);
    return y;
}

// Random problem with both classes present.
std::pair<Matrix, std::vector<int>> random_problem(std::size_t m, std::size_t k, std::mt19937_64& rng) {
    const auto x = oracle::random_matrix(m, k, rng);
    std::vector<int> labels(m);
    for (std::size_t i = 0; i < m; ++i) labels[i] = static_cast<int>(rng() % 2);
    labels[0] = 0;
    labels[1] = 1;
    return {x, labels};
}

}  // namespace

TEST_CASE("rbf kernel") {
    const double x[] = {1, 2, 3}, y[] = {1, 2, 4};
    CHECK(svm::rbf_kernel(x, x, 0.3) == 1.0);
    CHECK(svm::rbf_kernel(x, y, 1.0) == doctest::Approx(0.36788).epsilon(1e-5));
    const double half[] = {1, 2, 3 + std::sqrt(0.5)};
    CHECK(svm::rbf_kernel(x, half, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    const double short_v[] = {1, 2};
    CHECK_THROWS_AS(svm::rbf_kernel(x, short_v, 1.0), DimensionError);
    CHECK_THROWS_AS(svm::rbf_kernel(x, y, 0.0), InvalidArgument);

    std::mt19937_64 rng(10);
    const auto pts = oracle::random_matrix(10, 3, rng);
    Matrix k(10, 10);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) k(i, j) = svm::rbf_kernel(pts.row(i), pts.row(j), 0.8);
    CHECK(k == k.transposed());
    CHECK(oracle::symmetric_eigenvalues(k).back() >= -1e-10);
}

TEST_CASE("scale gamma uses the variance of all entries") {
    CHECK(svm::scale_gamma(Matrix{{0, 0}, {2, 2}}) == doctest::Approx(0.5));
    CHECK(svm::scale_gamma(Matrix{{1, 3}, {1, 3}, {1, 3}}) == doctest::Approx(0.5));
}

TEST_CASE("config validation") {
    svm::SvmConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.c = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.tol = -1;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.gamma = -0.5;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);

    const Matrix x{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(svm::train(x, std::vector<int>{1, 1}), InvalidArgument);
    CHECK_THROWS_AS(svm::train(x, std::vector<int>{0, 2}), InvalidArgument);
    CHECK_THROWS_AS(svm::train(x, std::vector<int>{0}), DimensionError);
}

TEST_CASE("two points") {
    svm::SvmConfig cfg;
    cfg.gamma = 0.5;
    const Matrix x{{-1, 0}, {1, 0}};
    const std::vector<int> labels{0, 1};
    const auto model = svm::train(x, labels, cfg);
    CHECK(model.support_indices.size() == 2);
    CHECK(model.bias == doctest::Approx(0.0).epsilon(1e-12));
    const auto p = svm::predict(model, x);
    CHECK(p.labels == labels);
    CHECK(p.decision[0] == doctest::Approx(-p.decision[1]).epsilon(1e-12));
    CHECK(svm::accuracy(labels, p.labels) == 1.0);
}

TEST_CASE("XOR with a brute-force dual grid") {
    const Matrix x{{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    const std::vector<int> labels{0, 0, 1, 1};
    svm::SvmConfig cfg;
    cfg.gamma = 1.0;
    cfg.c = 10.0;
    cfg.tol = 1e-6;
    const auto model = svm::train(x, labels, cfg);
    CHECK(svm::accuracy(labels, svm::predict(model, x).labels) == 1.0);

    // a0 + a1 = a2 + a3 on a 0.05 grid over [0, 10]
    const auto y = plus_minus(labels);
    double h[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h[i][j] = y[i] * y[j] * svm::rbf_kernel(x.row(i), x.row(j), 1.0);
    double best = -1e300;
    auto objective = [&](const double* a) {
        double lin = 0, quad = 0;
        for (int i = 0; i < 4; ++i) {
            lin += a[i];
            for (int j = 0; j < 4; ++j) quad += a[i] * a[j] * h[i][j];
        }
        return lin - 0.5 * quad;
    };
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j <= 200; ++j)
            for (int k = 0; k <= 200; ++k) {
                const double a[4] = {0.05 * i, 0.05 * j, 0.05 * k, 0.05 * (i + j - k)};
                if (a[3] < 0 || a[3] > 10) continue;
                best = std::max(best, objective(a));
            }
    CHECK(svm::dual_objective(model) >= best - 1e-6);
    CHECK(svm::dual_objective(model) <= best + 1e-2);  // grid spacing bound
}

TEST_CASE("fixed problem matches a reference solver") {
    // sklearn SVC(C=1, gamma=0.7, tol=1e-8) on the same six points
    const Matrix x{{0, 0}, {1, 0.2}, {0.3, 1}, {2, 2}, {1.5, 0.4}, {0.2, 1.8}};
    const std::vector<int> labels{0, 0, 1, 1, 0, 1};
    svm::SvmConfig cfg;
    cfg.gamma = 0.7;
    cfg.tol = 1e-7;
    const auto model = svm::train(x, labels, cfg);
    CHECK(svm::dual_objective(model) == doctest::Approx(2.7617821955489035).epsilon(1e-6));
    CHECK(model.bias == doctest::Approx(0.09875874).epsilon(1e-4));
    const double expect[] = {-0.7434776398843961, -1.0000000124622057, 0.5005525869608155,
                             0.9999999996212288,  -0.9189229585570198, 0.9999999800180157};
    const auto p = svm::predict(model, x);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(p.decision[i] - expect[i]) <= 1e-5);
}

TEST_CASE("random problems against the projected-gradient oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 2 + rng() % 7;
        auto [x, labels] = random_problem(m, 3, rng);
        svm::SvmConfig cfg;
        cfg.c = 0.5 + static_cast<double>(rng() % 40) / 10.0;
        const auto model = svm::train(x, labels, cfg);
        const auto ref = oracle::svm_dual(x, plus_minus(labels), cfg.c, model.gamma_rbf);
        CHECK(std::abs(svm::dual_objective(model) - ref.objective) <= 1e-3);
        CHECK(oracle::kkt_violation(model, x, labels) <= cfg.tol);
        double sum = 0;
        for (double a : model.dual_coefs) {
            CHECK(std::abs(a) <= cfg.c + 1e-12);
            sum += a;
        }
        CHECK(std::abs(sum) <= 1e-6);
    }
}

TEST_CASE("free support vectors sit on the margin") {
    std::mt19937_64 rng(77);
    auto [x, labels] = random_problem(40, 2, rng);
    svm::SvmConfig cfg;
    cfg.c = 5.0;
    const auto model = svm::train(x, labels, cfg);
    for (std::size_t s = 0; s < model.dual_coefs.size(); ++s) {
        const double a = std::abs(model.dual_coefs[s]);
        if (a > 1e-9 && a < cfg.c - 1e-9)
            CHECK(std::abs(std::abs(model.decision(x.row(model.support_indices[s]))) - 1.0) <= cfg.tol);
    }
    CHECK(oracle::kkt_violation(model, x, labels) <= cfg.tol);
}

TEST_CASE("label swap negates the decision function") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto [x, labels] = random_problem(30, 4, rng);
        std::vector<int> swapped;
        for (int l : labels) swapped.push_back(1 - l);
        const auto a = svm::train(x, labels), b = svm::train(x, swapped);
        const auto pa = svm::predict(a, x), pb = svm::predict(b, x);
        for (std::size_t i = 0; i < x.rows(); ++i) CHECK(std::abs(pa.decision[i] + pb.decision[i]) <= 1e-9);
        CHECK(svm::accuracy(labels, pa.labels) == svm::accuracy(swapped, pb.labels));
    }
}

TEST_CASE("training is deterministic") {
    std::mt19937_64 rng(6);
    auto [x, labels] = random_problem(50, 3, rng);
    const auto a = svm::train(x, labels), b = svm::train(x, labels);
    CHECK(a.dual_coefs == b.dual_coefs);
    CHECK(a.support_indices == b.support_indices);
    CHECK(a.bias == b.bias);
}

TEST_CASE("separable toy set is fit exactly") {
    Matrix x(20, 2);
    std::vector<int> labels(20);
    for (int i = 0; i < 20; ++i) {
        x(i, 0) = (i < 10 ? -2.0 : 2.0) + 0.1 * (i % 5);
        x(i, 1) = 0.2 * (i % 7);
        labels[i] = i < 10 ? 0 : 1;
    }
    const auto model = svm::train(x, labels);
    CHECK(svm::accuracy(labels, svm::predict(model, x).labels) == 1.0);
}

TEST_CASE("accuracy") {
    const std::vector<int> a{0, 1, 1, 0}, b{0, 1, 0, 0}, c{1, 0, 0, 1};
    CHECK(svm::accuracy(a, a) == 1.0);
    CHECK(svm::accuracy(a, c) == 0.0);
    CHECK(svm::accuracy(a, b) == 0.75);
    CHECK_THROWS_AS(svm::accuracy(a, std::vector<int>{0}), DimensionError);
    CHECK_THROWS_AS(svm::accuracy(std::vector<int>{}, std::vector<int>{}), InvalidArgument);
}
