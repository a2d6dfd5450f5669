#ifndef QCOV_EIGEN_HPP
#define QCOV_EIGEN_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcov/matrix.hpp"

namespace qcov {

/// Cyclic Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the matrix Frobenius norm.
inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
/// Eigenvalues below this fraction of the leading one are ignored when
/// comparing spectra.
inline constexpr double kSpectrumFloor = 1e-8;

/// Descending eigenvalues with unit eigenvectors stored as columns. In every
/// column the entry of largest magnitude (lowest index on ties) is positive.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
    std::string source;
    int sweeps = 0;

    std::size_t dim() const noexcept { return eigenvalues.size(); }
    std::vector<double> vector(std::size_t k) const { return eigenvectors.column(k); }
};

EigenDecomposition eigendecompose(const Matrix& a, std::string source = {});

/// Squared overlap (v . w)^2 of two unit vectors.
double fidelity(std::span<const double> v, std::span<const double> w);

/// Linear overlap |v . w| of two unit vectors.
double overlap(std::span<const double> v, std::span<const double> w);

/// Squared norm of the projection of unit vector v onto the span of the given
/// eigenvector columns. Use this instead of fidelity inside degenerate
/// eigenspaces.
double subspace_fidelity(std::span<const double> v, const EigenDecomposition& d, std::span<const std::size_t> columns);

struct SpectrumComparison {
    std::vector<double> lambda_q;
    std::vector<double> lambda_rho;
    int shift = 0;
    double max_rel_diff = 0.0;
    std::size_t compared = 0;  // number of indices inside the floored range
};

/// max_k |lambda_rho[k + shift] - lambda_q[k]| / lambda_q[0] over indices
/// whose lambda_q[k] is at least kSpectrumFloor * lambda_q[0].
SpectrumComparison compare_spectra(const EigenDecomposition& dq, const EigenDecomposition& drho, int shift);

}  // namespace qcov

#endif  // QCOV_EIGEN_HPP
