#include "qcov/pca.hpp"

#include <algorithm>
#include <cctype>

#include "qcov/covariance.hpp"
#include "qcov/error.hpp"

namespace qcov {

Scheme::Scheme(SchemeKind kind, double gamma_hc) : kind_(kind), gamma_hc_(gamma_hc) {
    if (!(gamma_hc >= 0.0 && gamma_hc <= 1.0))
        throw InvalidArgument("HC gamma must lie in [0, 1], got " + std::to_string(gamma_hc));
}

Scheme Scheme::parse(std::string_view name, double gamma_hc) {
    std::string up;
    for (char c : name) up.push_back(c == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "CL") return Scheme(SchemeKind::CL, gamma_hc);
    if (up == "UC") return Scheme(SchemeKind::UC, gamma_hc);
    if (up == "UC-SKIP") return Scheme(SchemeKind::UC_SKIP, gamma_hc);
    if (up == "C") return Scheme(SchemeKind::C, gamma_hc);
    if (up == "HC") return Scheme(SchemeKind::HC, gamma_hc);
    throw InvalidArgument("unknown scheme '" + std::string(name) + "'; valid schemes: " + valid_names());
}

std::vector<Scheme> Scheme::all(double gamma_hc) {
    return {Scheme(SchemeKind::CL, gamma_hc), Scheme(SchemeKind::UC, gamma_hc), Scheme(SchemeKind::UC_SKIP, gamma_hc),
            Scheme(SchemeKind::C, gamma_hc), Scheme(SchemeKind::HC, gamma_hc)};
}

std::string Scheme::valid_names() { return "CL, UC, UC-skip, C, HC"; }

std::string Scheme::name() const {
    switch (kind_) {
        case SchemeKind::CL: return "CL";
        case SchemeKind::UC: return "UC";
        case SchemeKind::UC_SKIP: return "UC-skip";
        case SchemeKind::C: return "C";
        case SchemeKind::HC: return "HC";
    }
    return "?";
}

PipelineConfig Scheme::pipeline() const {
    switch (kind_) {
        case SchemeKind::CL: return {true, 1.0, false};
        case SchemeKind::UC:
        case SchemeKind::UC_SKIP: return {true, 0.0, true};
        case SchemeKind::C: return {true, 1.0, true};
        case SchemeKind::HC: return {true, gamma_hc_, true};
    }
    return {};
}

PcaSpectrum fit_spectrum(const Matrix& train, const Scheme& scheme) {
    auto pipeline = FittedPipeline::fit(train, scheme.pipeline());
    const Matrix x = pipeline.apply(train);
    auto decomposition = scheme.uses_quantum_covariance() ? eigendecompose(quantum_covariance(x), "rho_bar")
                                                          : eigendecompose(classical_covariance(x), "Q");
    return {scheme, std::move(pipeline), std::move(decomposition)};
}

PcaModel select_components(const PcaSpectrum& spectrum, std::size_t k) {
    const std::size_t n = spectrum.decomposition.dim();
    const std::size_t offset = spectrum.scheme.skips_first() ? 1 : 0;
    if (k < 1 || k + offset > n)
        throw InvalidArgument("component count " + std::to_string(k) + " out of range for scheme " +
                              spectrum.scheme.name() + " with " + std::to_string(n) + " features");
    PcaModel model{spectrum.scheme, spectrum.pipeline, Matrix(n, k), k, offset == 1, {}};
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t r = 0; r < n; ++r) model.basis(r, c) = spectrum.decomposition.eigenvectors(r, c + offset);
        model.eigenvalues.push_back(spectrum.decomposition.eigenvalues[c + offset]);
    }
    return model;
}

PcaModel fit(const Matrix& train, const Scheme& scheme, std::size_t k) {
    return select_components(fit_spectrum(train, scheme), k);
}

Matrix transform(const PcaModel& model, const Matrix& data) {
    if (data.cols() != model.basis.rows())
        throw DimensionError("transform: data has " + std::to_string(data.cols()) + " features, model expects " +
                             std::to_string(model.basis.rows()));
    return multiply(model.pipeline.apply(data), model.basis);
}

}  // namespace qcov
