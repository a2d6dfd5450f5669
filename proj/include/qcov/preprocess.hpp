#ifndef QCOV_PREPROCESS_HPP
#define QCOV_PREPROCESS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qcov/matrix.hpp"

namespace qcov {

/// Features with a standard deviation below this are left unscaled.
inline constexpr double kConstantFeatureStd = 1e-12;
/// Rows with an L2 norm below this cannot be amplitude encoded.
inline constexpr double kMinRowNorm = 1e-12;

/// Population (divide-by-m) per-feature statistics of a training matrix.
struct FeatureStats {
    std::vector<double> means;
    std::vector<double> stds;
    std::size_t fitted_on = 0;

    std::size_t dim() const noexcept { return means.size(); }
};

/// Strength of partial centering; 0 is none, 1 is full.
class CenteringConfig {
public:
    explicit CenteringConfig(double gamma = 0.0);
    double gamma() const noexcept { return gamma_; }

private:
    double gamma_;
};

/// Which stages of the fixed standardize -> center -> normalize chain run.
struct PipelineConfig {
    bool standardize = true;
    CenteringConfig centering{0.0};
    bool l2_normalize = true;

    PipelineConfig() = default;
    PipelineConfig(bool standardize_, double gamma, bool l2_normalize_)
        : standardize(standardize_), centering(gamma), l2_normalize(l2_normalize_) {}
    double gamma() const noexcept { return centering.gamma(); }
};

FeatureStats fit_stats(const Matrix& samples);

/// Divides each feature by its standard deviation. Indices of features that
/// were passed through because they are constant are appended to
/// `constant_features` when it is non-null.
Matrix standardize(const Matrix& samples, const FeatureStats& stats, std::vector<std::size_t>* constant_features = nullptr);

/// x_ij - gamma * means_j.
Matrix partial_center(const Matrix& samples, const FeatureStats& stats, double gamma);

/// Scales every row to unit Euclidean norm.
Matrix l2_normalize(const Matrix& samples);

/// Statistics and the transform they induce. `center` holds the per-feature
/// offset in the standardized space (means / stds when standardizing).
class FittedPipeline {
public:
    FittedPipeline(PipelineConfig cfg, FeatureStats stats);

    static FittedPipeline fit(const Matrix& train, const PipelineConfig& cfg);

    /// Applies the fitted chain; row-independent.
    Matrix apply(const Matrix& samples) const;

    const PipelineConfig& config() const noexcept { return cfg_; }
    const FeatureStats& stats() const noexcept { return stats_; }
    const std::vector<std::size_t>& constant_features() const noexcept { return constant_; }

private:
    PipelineConfig cfg_;
    FeatureStats stats_;
    FeatureStats scaled_stats_;  // statistics expressed after standardization
    std::vector<std::size_t> constant_;
};

struct PipelineOutput {
    Matrix train;
    Matrix test;
    FeatureStats stats;
};

/// Fits statistics on `train` only and applies the chain to both splits.
PipelineOutput run_pipeline(const Matrix& train, const Matrix& test, const PipelineConfig& cfg);

}  // namespace qcov

#endif  // QCOV_PREPROCESS_HPP
