#ifndef QCOV_COVARIANCE_HPP
#define QCOV_COVARIANCE_HPP

#include <cstddef>
#include <vector>

#include "qcov/matrix.hpp"

namespace qcov {

/// Rows handed to quantum_covariance must have unit norm to this tolerance.
inline constexpr double kUnitNormTolerance = 1e-9;

/// Classical and quantum covariance of one L2-normalized dataset together
/// with the mean vector that separates them (q = rho_bar - mu mu^T).
struct CovariancePair {
    Matrix q;
    Matrix rho_bar;
    std::vector<double> mu;
    Matrix m_outer;
    std::size_t sample_count = 0;

    double mu_norm() const;
};

/// Column means.
std::vector<double> mean_vector(const Matrix& samples);

/// Outer product v v^T.
Matrix outer(const std::vector<double>& v);

/// Average density matrix (1/m) sum_i x_i x_i^T of unit-norm rows.
Matrix quantum_covariance(const Matrix& normalized_samples);

/// Population covariance (1/m) sum_i (x_i - mu)(x_i - mu)^T. Accepts any data.
Matrix classical_covariance(const Matrix& samples);

CovariancePair build_pair(const Matrix& normalized_samples);

/// Largest |a_ij - a_ji|.
double asymmetry(const Matrix& a);

}  // namespace qcov

#endif  // QCOV_COVARIANCE_HPP
