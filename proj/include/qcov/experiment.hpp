#ifndef QCOV_EXPERIMENT_HPP
#define QCOV_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcov/covariance.hpp"
#include "qcov/dataio.hpp"
#include "qcov/eigen.hpp"
#include "qcov/pca.hpp"
#include "qcov/svm.hpp"

namespace qcov {

struct CvConfig {
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    bool stratified = true;
};

struct Fold {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

/// Seeded (stratified) k-fold split. Per class, fold sizes differ by at most 1.
std::vector<Fold> make_folds(const std::vector<int>& labels, const CvConfig& cfg);

struct ReportRow {
    ClassPairTask task;
    Scheme scheme;
    std::size_t n_components = 0;
    double train_mean = 0, train_std = 0;
    double test_mean = 0, test_std = 0;
    std::size_t folds = 0;      // folds that completed
    std::string status = "ok";  // "ok" or "failed: <reason>"

    bool ok() const noexcept { return status == "ok"; }
};

struct ExperimentReport {
    std::vector<ReportRow> rows;

    bool all_ok() const;
    const ReportRow* find(const ClassPairTask& task, SchemeKind scheme, std::size_t k) const;
};

/// Per (task, fold, scheme, k): PCA fitted on the training fold, SVM trained on
/// the projected training fold, accuracy on both splits. Rows are ordered by
/// (task, scheme, k) in input order. Failures are recorded per row.
ExperimentReport run_classification(const SpectralDataset& ds, const std::vector<ClassPairTask>& tasks,
                                    const std::vector<Scheme>& schemes, const std::vector<std::size_t>& ks,
                                    const CvConfig& cv, const svm::SvmConfig& svm_cfg, std::size_t workers = 1);

/// Whole-subset spectral analysis at one centering strength.
struct SpectrumReport {
    double gamma = 0;
    double mu_norm = 0;
    EigenDecomposition q;
    EigenDecomposition rho;
    SpectrumComparison shift0;
    SpectrumComparison shift1;
};

/// Standardize, center by gamma and L2-normalize the task's whole subset.
Matrix preprocess_subset(const SpectralDataset& ds, const ClassPairTask& task, double gamma);

SpectrumReport run_spectrum_report(const SpectralDataset& ds, const ClassPairTask& task, double gamma);

struct SweepRecord {
    double gamma = 0;
    double mu_norm = 0;
    double fid_q1_rho0 = 0;
    double fid_q1_rho1 = 0;
    double overlap_q1_rho0 = 0;
    double overlap_q1_rho1 = 0;
};

/// Default grid: 101 points on [0, 1] plus 100 points on [0.9, 1], merged.
std::vector<double> default_gamma_grid();

/// One record per grid value, sorted by gamma. Fidelities compare Q's leading
/// eigenvector with rho_bar's first two.
std::vector<SweepRecord> run_gamma_sweep(const SpectralDataset& ds, const ClassPairTask& task,
                                         std::vector<double> grid, std::size_t workers = 1);

struct Crossing {
    double gamma = 0;
    double mu_norm = 0;
};

/// First sign change of fid_q1_rho0 - fid_q1_rho1 along the grid, linearly
/// interpolated. nullopt if there is none.
std::optional<Crossing> find_crossing(const std::vector<SweepRecord>& records);

/// Mean and population standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& v);

}  // namespace qcov

#endif  // QCOV_EXPERIMENT_HPP
