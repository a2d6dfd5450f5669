#include "qcov/preprocess.hpp"

#include <cmath>

#include "qcov/error.hpp"

namespace qcov {

namespace {

void check_dim(const Matrix& samples, const FeatureStats& stats, const char* what) {
    if (samples.cols() != stats.dim())
        throw DimensionError(std::string(what) + ": samples have " + std::to_string(samples.cols()) +
                             " features but statistics have " + std::to_string(stats.dim()));
}

}  // namespace

CenteringConfig::CenteringConfig(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw InvalidArgument("centering gamma must lie in [0, 1], got " + std::to_string(gamma));
}

// Two passes with left-to-right long double accumulation, so results do not
// depend on how rows are partitioned.
FeatureStats fit_stats(const Matrix& samples) {
    const std::size_t m = samples.rows(), n = samples.cols();
    if (m == 0) throw InvalidArgument("fit_stats: empty input");
    std::vector<long double> sum(n, 0.0L);
    for (std::size_t i = 0; i < m; ++i) {
        auto row = samples.row(i);
        for (std::size_t j = 0; j < n; ++j) sum[j] += row[j];
    }
    FeatureStats st;
    st.fitted_on = m;
    st.means.resize(n);
    for (std::size_t j = 0; j < n; ++j) st.means[j] = static_cast<double>(sum[j] / static_cast<long double>(m));

    std::vector<long double> ss(n, 0.0L);
    for (std::size_t i = 0; i < m; ++i) {
        auto row = samples.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const long double d = static_cast<long double>(row[j]) - st.means[j];
            ss[j] += d * d;
        }
    }
    st.stds.resize(n);
    for (std::size_t j = 0; j < n; ++j) st.stds[j] = static_cast<double>(std::sqrt(ss[j] / static_cast<long double>(m)));
    return st;
}

Matrix standardize(const Matrix& samples, const FeatureStats& stats, std::vector<std::size_t>* constant_features) {
    check_dim(samples, stats, "standardize");
    Matrix out = samples;
    for (std::size_t j = 0; j < stats.dim(); ++j) {
        if (stats.stds[j] < kConstantFeatureStd) {
            if (constant_features) constant_features->push_back(j);
            continue;
        }
        for (std::size_t i = 0; i < out.rows(); ++i) out(i, j) /= stats.stds[j];
    }
    return out;
}

Matrix partial_center(const Matrix& samples, const FeatureStats& stats, double gamma) {
    check_dim(samples, stats, "partial_center");
    CenteringConfig checked(gamma);
    Matrix out = samples;
    if (gamma == 0.0) return out;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) row[j] -= gamma * stats.means[j];
    }
    return out;
}

Matrix l2_normalize(const Matrix& samples) {
    Matrix out = samples;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        long double ss = 0.0L;
        for (double v : row) ss += static_cast<long double>(v) * v;
        const double norm = static_cast<double>(std::sqrt(ss));
        if (!(norm >= kMinRowNorm)) throw NumericalError("row " + std::to_string(i) + " has no L2 direction");
        for (double& v : row) v /= norm;
    }
    return out;
}

FittedPipeline::FittedPipeline(PipelineConfig cfg, FeatureStats stats) : cfg_(cfg), stats_(std::move(stats)) {
    if (stats_.stds.size() != stats_.means.size()) throw DimensionError("FeatureStats vectors differ in length");
    scaled_stats_ = stats_;
    if (cfg_.standardize) {
        for (std::size_t j = 0; j < stats_.dim(); ++j) {
            if (stats_.stds[j] < kConstantFeatureStd) {
                constant_.push_back(j);
            } else {
                scaled_stats_.means[j] = stats_.means[j] / stats_.stds[j];
                scaled_stats_.stds[j] = 1.0;
            }
        }
    }
}

FittedPipeline FittedPipeline::fit(const Matrix& train, const PipelineConfig& cfg) {
    return FittedPipeline(cfg, fit_stats(train));
}

Matrix FittedPipeline::apply(const Matrix& samples) const {
    Matrix x = cfg_.standardize ? standardize(samples, stats_) : samples;
    x = partial_center(x, scaled_stats_, cfg_.gamma());
    if (cfg_.l2_normalize) x = l2_normalize(x);
    return x;
}

PipelineOutput run_pipeline(const Matrix& train, const Matrix& test, const PipelineConfig& cfg) {
    if (train.cols() != test.cols())
        throw DimensionError("run_pipeline: train has " + std::to_string(train.cols()) + " features, test has " +
                             std::to_string(test.cols()));
    const auto fitted = FittedPipeline::fit(train, cfg);
    return {fitted.apply(train), fitted.apply(test), fitted.stats()};
}

}  // namespace qcov
