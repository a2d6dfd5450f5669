#ifndef QCOV_SVM_HPP
#define QCOV_SVM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcov/matrix.hpp"

namespace qcov::svm {

struct SvmConfig {
    double c = 1.0;
    /// Explicit RBF width; nullopt selects 1 / (k * Var(X)) over all training entries.
    std::optional<double> gamma;
    /// KKT tolerance on y_i f(x_i) for every training sample.
    double tol = 1e-3;
    /// SMO iteration cap; 0 picks max(10^7, 100 m).
    std::size_t max_iterations = 0;
    /// Fixes the scan order used to break ties in working-set selection.
    std::uint64_t seed = 0;

    void validate() const;
};

struct SvmModel {
    Matrix support_vectors;            // s x k
    std::vector<double> dual_coefs;    // alpha_i * y_i, with y = +1 for label 1
    std::vector<std::size_t> support_indices;  // rows of the training matrix
    double bias = 0.0;
    double gamma_rbf = 1.0;
    SvmConfig config;
    bool converged = true;
    std::size_t iterations = 0;

    /// f(x) = sum_i dual_coefs_i K(sv_i, x) + bias.
    double decision(std::span<const double> x) const;
};

struct Prediction {
    std::vector<int> labels;
    std::vector<double> decision;
};

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma_rbf);

/// Gamma selected by the "scale" rule for this training matrix.
double scale_gamma(const Matrix& x);

/// Soft-margin RBF SVM via SMO. Labels must be 0/1 with both present.
SvmModel train(const Matrix& x, std::span<const int> labels, const SvmConfig& cfg = {});

/// Label 1 iff f(x) > 0.
Prediction predict(const SvmModel& model, const Matrix& x);

/// sum_i alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij at the trained alphas.
double dual_objective(const SvmModel& model);

double accuracy(std::span<const int> truth, std::span<const int> predicted);

}  // namespace qcov::svm

#endif  // QCOV_SVM_HPP
