#ifndef QCOV_PCA_HPP
#define QCOV_PCA_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcov/eigen.hpp"
#include "qcov/matrix.hpp"
#include "qcov/preprocess.hpp"

namespace qcov {

/// The five preprocessing schemes:
///   CL       standardize, full centering, no normalization, PCA on Q
///   UC       standardize, no centering, L2 normalization, PCA on rho_bar
///   UC_SKIP  as UC, but the leading eigenvector of rho_bar is dropped
///   C        standardize, full centering, L2 normalization, PCA on rho_bar
///   HC       standardize, partial centering (gamma_hc), L2 normalization, PCA on rho_bar
enum class SchemeKind { CL, UC, UC_SKIP, C, HC };

class Scheme {
public:
    static constexpr double kDefaultHcGamma = 0.95;

    explicit Scheme(SchemeKind kind = SchemeKind::CL, double gamma_hc = kDefaultHcGamma);

    /// Accepts CL, UC, UC-skip (or UC_SKIP), C, HC; case-insensitive.
    static Scheme parse(std::string_view name, double gamma_hc = kDefaultHcGamma);
    static std::vector<Scheme> all(double gamma_hc = kDefaultHcGamma);
    static std::string valid_names();

    SchemeKind kind() const noexcept { return kind_; }
    double gamma_hc() const noexcept { return gamma_hc_; }
    std::string name() const;

    /// Preprocessing chain the scheme runs before PCA.
    PipelineConfig pipeline() const;
    bool uses_quantum_covariance() const noexcept { return kind_ != SchemeKind::CL; }
    bool skips_first() const noexcept { return kind_ == SchemeKind::UC_SKIP; }

    friend bool operator==(const Scheme&, const Scheme&) = default;

private:
    SchemeKind kind_;
    double gamma_hc_;
};

/// Full eigendecomposition of a scheme's covariance on a training fold. Any
/// number of components can be cut from it without refitting.
struct PcaSpectrum {
    Scheme scheme;
    FittedPipeline pipeline;
    EigenDecomposition decomposition;
};

struct PcaModel {
    Scheme scheme;
    FittedPipeline pipeline;
    Matrix basis;  // n x k, selected eigenvector columns
    std::size_t component_count = 0;
    bool skip_first = false;
    std::vector<double> eigenvalues;  // of the selected columns

    const FeatureStats& stats() const noexcept { return pipeline.stats(); }
};

PcaSpectrum fit_spectrum(const Matrix& train, const Scheme& scheme);

/// Cuts k components (after the skipped one, for UC_SKIP).
PcaModel select_components(const PcaSpectrum& spectrum, std::size_t k);

PcaModel fit(const Matrix& train, const Scheme& scheme, std::size_t k);

/// Preprocesses with the model's training statistics, then projects.
Matrix transform(const PcaModel& model, const Matrix& data);

}  // namespace qcov

#endif  // QCOV_PCA_HPP
