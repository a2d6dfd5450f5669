#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "qcov/error.hpp"
#include "qcov/experiment.hpp"
#include "synthetic.hpp"

using namespace qcov;

namespace {

std::vector<int> labels_of(std::initializer_list<std::pair<int, int>> counts) {
    std::vector<int> out;
    for (auto [label, n] : counts)
        for (int i = 0; i < n; ++i) out.push_back(label);
    return out;
}

SweepRecord rec(double gamma, double diff, double mu) {
    SweepRecord r;
    r.gamma = gamma;
    r.mu_norm = mu;
    r.fid_q1_rho0 = 0.5 + diff / 2;
    r.fid_q1_rho1 = 0.5 - diff / 2;
    return r;
}

}  // namespace

TEST_CASE("folds partition the samples") {
    const auto labels = labels_of({{0, 23}, {1, 41}, {2, 7}});
    const auto folds = make_folds(labels, {5, 3, true});
    REQUIRE(folds.size() == 5);
    std::vector<int> seen(labels.size(), 0);
    for (const auto& f : folds) {
        CHECK(std::is_sorted(f.test.begin(), f.test.end()));
        CHECK(std::is_sorted(f.train.begin(), f.train.end()));
        CHECK(f.train.size() + f.test.size() == labels.size());
        for (auto i : f.test) ++seen[i];
        std::set<std::size_t> tr(f.train.begin(), f.train.end());
        for (auto i : f.test) CHECK(tr.count(i) == 0);
    }
    for (int s : seen) CHECK(s == 1);

    for (int cls = 0; cls < 3; ++cls) {
        std::vector<std::size_t> per_fold;
        for (const auto& f : folds)
            per_fold.push_back(std::count_if(f.test.begin(), f.test.end(), [&](auto i) { return labels[i] == cls; }));
        const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
        CHECK(*hi - *lo <= 1);
    }
    std::vector<std::size_t> sizes;
    for (const auto& f : folds) sizes.push_back(f.test.size());
    CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
}

TEST_CASE("exact stratification and determinism") {
    const auto labels = labels_of({{0, 5}, {1, 5}});
    const auto folds = make_folds(labels, {5, 0, true});
    for (const auto& f : folds) {
        REQUIRE(f.test.size() == 2);
        CHECK(labels[f.test[0]] != labels[f.test[1]]);
    }
    const auto again = make_folds(labels, {5, 0, true});
    for (std::size_t k = 0; k < 5; ++k) CHECK(folds[k].test == again[k].test);
    const auto other = make_folds(labels, {5, 1, true});
    bool differs = false;
    for (std::size_t k = 0; k < 5; ++k) differs |= folds[k].test != other[k].test;
    CHECK(differs);

    const auto plain = make_folds(labels, {5, 0, false});
    for (const auto& f : plain) CHECK(f.test.size() == 2);
}

TEST_CASE("fold errors") {
    CHECK_THROWS_AS(make_folds(labels_of({{0, 4}, {1, 9}}), {5, 0, true}), InvalidArgument);
    CHECK_THROWS_AS(make_folds(labels_of({{0, 4}, {1, 9}}), {1, 0, true}), InvalidArgument);
    CHECK_THROWS_AS(make_folds(labels_of({{0, 2}}), {3, 0, false}), InvalidArgument);
}

TEST_CASE("find_crossing") {
    const auto c = find_crossing({rec(0.9, -0.4, 0.9), rec(0.95, -0.1, 0.8), rec(1.0, 0.2, 0.1)});
    REQUIRE(c);
    CHECK(c->gamma == doctest::Approx(0.95 + 0.05 * (0.1 / 0.3)));
    CHECK(c->gamma == doctest::Approx(0.96667).epsilon(1e-5));
    CHECK(c->mu_norm == doctest::Approx(0.8 - 0.7 / 3.0));
    CHECK_FALSE(find_crossing({rec(0.0, -0.5, 1), rec(0.5, -0.3, 0.5), rec(1.0, -0.01, 0)}));
    const auto exact = find_crossing({rec(0.0, -0.5, 1), rec(0.5, 0.0, 0.4), rec(1.0, 0.3, 0)});
    REQUIRE(exact);
    CHECK(exact->gamma == 0.5);
    CHECK_THROWS_AS(find_crossing({rec(0.0, 1, 1)}), InvalidArgument);
}

TEST_CASE("default gamma grid") {
    const auto g = default_gamma_grid();
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(std::is_sorted(g.begin(), g.end()));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] - g[i - 1] > 1e-12);
    CHECK(g.size() >= 195);
    CHECK(std::count_if(g.begin(), g.end(), [](double x) { return x >= 0.9 - 1e-12; }) >= 100);
}

TEST_CASE("mean_std is population") {
    const auto [m, s] = mean_std({1, 3});
    CHECK(m == 2);
    CHECK(s == 1);
    CHECK(std::isnan(mean_std({}).first));
}

TEST_CASE("classification grid is complete and worker independent") {
    const auto ds = synthetic::dataset();
    const std::vector<ClassPairTask> tasks{{3, 10}, {2, 11}, {5, 8}};
    const std::vector<std::size_t> ks{2, 3, 4, 5, 7};
    const auto one = run_classification(ds, tasks, Scheme::all(), ks, {}, {}, 1);
    CHECK(one.rows.size() == 75);
    CHECK(one.all_ok());
    for (const auto& r : one.rows) {
        CHECK(r.folds == 5);
        CHECK((r.test_mean >= 0 && r.test_mean <= 1 && r.train_std >= 0 && r.test_std >= 0));
    }
    const auto three = run_classification(ds, tasks, Scheme::all(), ks, {}, {}, 3);
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        CHECK(one.rows[i].test_mean == three.rows[i].test_mean);
        CHECK(one.rows[i].train_std == three.rows[i].train_std);
    }
    CHECK(one.find(ClassPairTask(5, 8), SchemeKind::HC, 7) == &one.rows[74]);
}

TEST_CASE("failed cells are recorded, not fatal") {
    const auto ds = synthetic::dataset();
    // 8 bands: UC-skip cannot retain 8 components
    const auto report = run_classification(ds, {ClassPairTask(3, 10), ClassPairTask(3, 42)},
                                           {Scheme(SchemeKind::UC), Scheme(SchemeKind::UC_SKIP)}, {2, 8}, {}, {});
    CHECK(report.rows.size() == 8);
    CHECK(report.rows[0].ok());
    CHECK(report.rows[1].ok());  // UC k=8
    CHECK_FALSE(report.rows[3].ok());  // UC-skip k=8
    CHECK(std::isnan(report.rows[3].test_mean));
    CHECK(report.rows[3].status.find("out of range") != std::string::npos);
    for (std::size_t i = 4; i < 8; ++i) CHECK(report.rows[i].status.find("class 42") != std::string::npos);
    CHECK_FALSE(report.all_ok());
}

TEST_CASE("test rows never reach fitted statistics") {
    // Poisoning every test row must leave the training-fold pipeline unchanged.
    const auto ds = select_pair(synthetic::dataset(), ClassPairTask(3, 10));
    const auto folds = make_folds(ds.labels(), {});
    for (const auto& f : folds) {
        Matrix poisoned = ds.samples();
        for (auto i : f.test)
            for (double& v : poisoned.row(i)) v += 1e4;
        const auto a = fit(ds.samples().select_rows(f.train), Scheme(SchemeKind::HC), 3);
        const auto b = fit(poisoned.select_rows(f.train), Scheme(SchemeKind::HC), 3);
        CHECK(a.stats().means == b.stats().means);
        CHECK(a.stats().stds == b.stats().stds);
        CHECK(a.basis == b.basis);
    }
}

TEST_CASE("spectrum report on synthetic data") {
    const auto ds = synthetic::dataset();
    const auto r0 = run_spectrum_report(ds, ClassPairTask(3, 10), 0.0);
    CHECK(r0.shift1.max_rel_diff < r0.shift0.max_rel_diff);
    CHECK(r0.mu_norm > 0.9);
    const auto r1 = run_spectrum_report(ds, ClassPairTask(3, 10), 1.0);
    CHECK(r1.mu_norm < r0.mu_norm);
    CHECK(r1.shift0.max_rel_diff < r0.shift0.max_rel_diff);
    double sum = 0;
    for (double l : r1.rho.eigenvalues) sum += l;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("centered Gaussian data: rho_bar and Q agree after full centering") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix x(400, 4);
    std::vector<int> labels(400);
    for (std::size_t i = 0; i < 400; ++i) {
        for (std::size_t j = 0; j < 4; ++j) x(i, j) = g(rng) * (1.0 + j);
        labels[i] = i % 2;
    }
    const SpectralDataset ds(x, labels, "gauss");
    const auto r = run_spectrum_report(ds, ClassPairTask(0, 1), 1.0);
    CHECK(r.mu_norm < 0.1);
    CHECK(r.shift0.max_rel_diff < 0.05);
}

TEST_CASE("gamma sweep records") {
    const auto ds = synthetic::dataset();
    const std::vector<double> grid{1.0, 0.0, 0.5, 0.5, 0.9};
    const auto recs = run_gamma_sweep(ds, ClassPairTask(3, 10), grid, 2);
    REQUIRE(recs.size() == 4);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (i) CHECK(recs[i].gamma > recs[i - 1].gamma);
        CHECK((recs[i].fid_q1_rho0 >= 0 && recs[i].fid_q1_rho0 <= 1 + 1e-12));
        CHECK(recs[i].overlap_q1_rho1 * recs[i].overlap_q1_rho1 == doctest::Approx(recs[i].fid_q1_rho1));
        CHECK(recs[i].mu_norm >= 0);
    }
    CHECK(recs.front().fid_q1_rho1 > recs.front().fid_q1_rho0);
    CHECK(recs.back().mu_norm < recs.front().mu_norm);
    CHECK_THROWS_AS(run_gamma_sweep(ds, ClassPairTask(3, 10), {0.5, 1.2}), InvalidArgument);
    CHECK_THROWS_AS(run_gamma_sweep(ds, ClassPairTask(3, 10), {}), InvalidArgument);
}

TEST_CASE("sweep on a point-symmetric cloud") {
    // antipodal pairs around (5, 5), concentrated along the diagonal
    Matrix x(24, 2);
    std::vector<int> labels(24);
    for (int k = 0; k < 12; ++k) {
        const double t = M_PI / 4 + 0.05 * (k - 5.5), r = 1.0 + 0.1 * k;
        x(2 * k, 0) = 5 + r * std::cos(t);
        x(2 * k, 1) = 5 + r * std::sin(t);
        x(2 * k + 1, 0) = 5 - r * std::cos(t);
        x(2 * k + 1, 1) = 5 - r * std::sin(t);
        labels[2 * k] = labels[2 * k + 1] = k % 2;
    }
    const SpectralDataset ds(x, labels, "pairs");
    const auto recs = run_gamma_sweep(ds, ClassPairTask(0, 1), {0.0, 1.0});
    CHECK(recs[1].mu_norm <= 1e-12);
    CHECK(recs[1].fid_q1_rho0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(recs[0].mu_norm > 0.9);
}
