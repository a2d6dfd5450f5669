#include "qcov/covariance.hpp"

#include <cmath>

#include "qcov/error.hpp"

namespace qcov {

namespace {

// Upper triangle accumulated in long double, then mirrored so the result is
// exactly symmetric.
template <typename RowFn>
Matrix accumulate_gram(std::size_t m, std::size_t n, RowFn&& row_at) {
    std::vector<long double> acc(n * (n + 1) / 2, 0.0L);
    std::vector<long double> x(n);
    for (std::size_t i = 0; i < m; ++i) {
        row_at(i, x);
        std::size_t k = 0;
        for (std::size_t a = 0; a < n; ++a) {
            const long double xa = x[a];
            for (std::size_t b = a; b < n; ++b) acc[k++] += xa * x[b];
        }
    }
    Matrix out(n, n);
    std::size_t k = 0;
    const long double count = static_cast<long double>(m);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            const double v = static_cast<double>(acc[k++] / count);
            out(a, b) = v;
            out(b, a) = v;
        }
    return out;
}

}  // namespace

double CovariancePair::mu_norm() const {
    long double ss = 0.0L;
    for (double v : mu) ss += static_cast<long double>(v) * v;
    return static_cast<double>(std::sqrt(ss));
}

std::vector<double> mean_vector(const Matrix& samples) {
    if (samples.rows() == 0) throw InvalidArgument("mean_vector: empty input");
    std::vector<long double> sum(samples.cols(), 0.0L);
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        auto row = samples.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) sum[j] += row[j];
    }
    std::vector<double> mu(samples.cols());
    for (std::size_t j = 0; j < mu.size(); ++j) mu[j] = static_cast<double>(sum[j] / samples.rows());
    return mu;
}

Matrix outer(const std::vector<double>& v) {
    Matrix out(v.size(), v.size());
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = 0; b < v.size(); ++b) out(a, b) = v[a] * v[b];
    return out;
}

Matrix quantum_covariance(const Matrix& normalized_samples) {
    const std::size_t m = normalized_samples.rows(), n = normalized_samples.cols();
    if (m == 0) throw InvalidArgument("quantum_covariance: empty input");
    for (std::size_t i = 0; i < m; ++i) {
        long double ss = 0.0L;
        for (double v : normalized_samples.row(i)) ss += static_cast<long double>(v) * v;
        const double norm = static_cast<double>(std::sqrt(ss));
        if (std::abs(norm - 1.0) > kUnitNormTolerance)
            throw InvalidArgument("quantum_covariance: row " + std::to_string(i) + " has norm " +
                                  std::to_string(norm) + ", expected unit norm");
    }
    return accumulate_gram(m, n, [&](std::size_t i, std::vector<long double>& x) {
        auto row = normalized_samples.row(i);
        for (std::size_t j = 0; j < n; ++j) x[j] = row[j];
    });
}

Matrix classical_covariance(const Matrix& samples) {
    const std::size_t m = samples.rows(), n = samples.cols();
    if (m == 0) throw InvalidArgument("classical_covariance: empty input");
    std::vector<long double> mean(n, 0.0L);
    for (std::size_t i = 0; i < m; ++i) {
        auto row = samples.row(i);
        for (std::size_t j = 0; j < n; ++j) mean[j] += row[j];
    }
    for (auto& v : mean) v /= static_cast<long double>(m);
    return accumulate_gram(m, n, [&](std::size_t i, std::vector<long double>& x) {
        auto row = samples.row(i);
        for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<long double>(row[j]) - mean[j];
    });
}

CovariancePair build_pair(const Matrix& normalized_samples) {
    CovariancePair p;
    p.rho_bar = quantum_covariance(normalized_samples);
    p.q = classical_covariance(normalized_samples);
    p.mu = mean_vector(normalized_samples);
    p.m_outer = outer(p.mu);
    p.sample_count = normalized_samples.rows();
    return p;
}

double asymmetry(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("asymmetry: matrix is not square");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
    return worst;
}

}  // namespace qcov
