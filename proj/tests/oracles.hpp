// Reference implementations used only by tests. They share no code with the
// library beyond the Matrix container.
#ifndef QCOV_TESTS_ORACLES_HPP
#define QCOV_TESTS_ORACLES_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "qcov/matrix.hpp"
#include "qcov/svm.hpp"

namespace oracle {

// Eigenvalues of a symmetric matrix, descending. Householder reduction to
// tridiagonal form, then Sturm-sequence bisection for each eigenvalue.
std::vector<double> symmetric_eigenvalues(const qcov::Matrix& a);

// (1/m) sum x x^T by explicit double loop.
qcov::Matrix second_moment(const qcov::Matrix& x);
// Population covariance via plain double loops over centered data.
qcov::Matrix covariance(const qcov::Matrix& x);

struct DualSolution {
    std::vector<double> alpha;
    double objective = 0;
};
// max sum(a) - 1/2 a^T H a, H_ij = y_i y_j exp(-gamma |x_i - x_j|^2),
// 0 <= a <= c, y^T a = 0. Accelerated projected gradient; the projection onto
// box-and-hyperplane finds its multiplier by bisection.
DualSolution svm_dual(const qcov::Matrix& x, const std::vector<int>& y_pm, double c, double gamma,
                      int iterations = 20000);

// Largest violation of the KKT conditions of a trained model on its training
// set, measured on y f(x) with y in {-1, +1}. Zero when all hold exactly.
double kkt_violation(const qcov::svm::SvmModel& model, const qcov::Matrix& x, const std::vector<int>& labels);

qcov::Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -1, double hi = 1);
qcov::Matrix random_symmetric(std::size_t n, std::mt19937_64& rng);
// Rows scaled to unit length.
qcov::Matrix unit_rows(qcov::Matrix x);
// Orthonormal n x n matrix from Gram-Schmidt on a random matrix.
qcov::Matrix random_orthonormal(std::size_t n, std::mt19937_64& rng);

}  // namespace oracle

#endif
