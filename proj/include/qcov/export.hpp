#ifndef QCOV_EXPORT_HPP
#define QCOV_EXPORT_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "qcov/experiment.hpp"
#include "qcov/matrix.hpp"
#include "qcov/pca.hpp"

namespace qcov {

/// "%.17g": shortest form that round-trips every double.
std::string format_real(double v);
/// "%.16e": scientific notation, 17 significant digits.
std::string format_scientific(double v);

/// Row-major matrix, no header, scientific notation.
void write_matrix_csv(std::ostream& out, const Matrix& m);

/// index,lambda_q,lambda_rho
void write_spectrum_csv(std::ostream& out, const SpectrumReport& r);

/// gamma,mu_norm,fid_q1_rho0,fid_q1_rho1,overlap_q1_rho0,overlap_q1_rho1
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

/// task,scheme,n_components,train_mean,train_std,test_mean,test_std,folds,status
void write_report_csv(std::ostream& out, const ExperimentReport& report);

/// Accuracy table with "mean(std)" cells at two decimals, one block per task
/// and one Train/Test column pair per scheme.
std::string render_table(const ExperimentReport& report);

/// "0.99(0.00)"
std::string format_cell(double mean, double std);

/// Key/value header record (scheme, k, gamma, statistics) followed by the
/// basis rows.
void write_pca_model(std::ostream& out, const PcaModel& model);

/// Opens `path` for writing or throws naming the path.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace qcov

#endif  // QCOV_EXPORT_HPP
