#include "qcov/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>

#include "qcov/error.hpp"
#include "qcov/random.hpp"

namespace qcov::svm {

namespace {

constexpr double kTau = 1e-12;                  // floor for non-positive curvature
constexpr std::size_t kCacheBytes = 256u << 20;  // kernel row cache budget

// Lazily computed kernel rows with least-recently-used eviction.
class KernelCache {
public:
    KernelCache(const Matrix& x, double gamma) : x_(x), gamma_(gamma), rows_(x.rows()), where_(x.rows()) {
        const std::size_t per_row = std::max<std::size_t>(1, x.rows() * sizeof(double));
        capacity_ = std::max<std::size_t>(2, kCacheBytes / per_row);
    }

    const std::vector<double>& row(std::size_t i) {
        if (!rows_[i].empty()) {
            lru_.splice(lru_.begin(), lru_, where_[i]);
            return rows_[i];
        }
        if (lru_.size() >= capacity_) {
            const std::size_t victim = lru_.back();
            lru_.pop_back();
            std::vector<double>().swap(rows_[victim]);
        }
        auto& r = rows_[i];
        r.resize(x_.rows());
        auto xi = x_.row(i);
        for (std::size_t t = 0; t < x_.rows(); ++t) r[t] = rbf_kernel(xi, x_.row(t), gamma_);
        lru_.push_front(i);
        where_[i] = lru_.begin();
        return r;
    }

private:
    const Matrix& x_;
    double gamma_;
    std::size_t capacity_;
    std::vector<std::vector<double>> rows_;
    std::list<std::size_t> lru_;
    std::vector<std::list<std::size_t>::iterator> where_;
};

}  // namespace

void SvmConfig::validate() const {
    if (!(c > 0)) throw InvalidArgument("SVM C must be positive");
    if (!(tol > 0)) throw InvalidArgument("SVM tolerance must be positive");
    if (gamma && !(*gamma > 0)) throw InvalidArgument("explicit RBF gamma must be positive");
}

double SvmModel::decision(std::span<const double> x) const {
    if (x.size() != support_vectors.cols())
        throw DimensionError("SVM decision: input has " + std::to_string(x.size()) + " features, model expects " +
                             std::to_string(support_vectors.cols()));
    double f = 0.0;
    for (std::size_t i = 0; i < dual_coefs.size(); ++i)
        f += dual_coefs[i] * rbf_kernel(support_vectors.row(i), x, gamma_rbf);
    return f + bias;
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma_rbf) {
    if (x.size() != y.size()) throw DimensionError("rbf_kernel: dimension mismatch");
    if (!(gamma_rbf > 0)) throw InvalidArgument("rbf_kernel: gamma must be positive");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-gamma_rbf * d2);
}

double scale_gamma(const Matrix& x) {
    const auto v = x.data();
    if (v.empty()) throw InvalidArgument("scale_gamma: empty matrix");
    long double sum = 0.0L;
    for (double e : v) sum += e;
    const long double mean = sum / v.size();
    long double ss = 0.0L;
    for (double e : v) ss += (e - mean) * (e - mean);
    const double var = static_cast<double>(ss / v.size());
    return var > 0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
}

// Sequential minimal optimization with second-order working-set selection.
// Internally the class of sample 0 is +1, which makes the solver path
// independent of which class the caller calls "1".
SvmModel train(const Matrix& x, std::span<const int> labels, const SvmConfig& cfg) {
    cfg.validate();
    const std::size_t m = x.rows();
    if (labels.size() != m) throw DimensionError("SVM train: label count differs from sample count");
    if (m < 2) throw InvalidArgument("SVM train: need at least 2 samples");
    for (int l : labels)
        if (l != 0 && l != 1) throw InvalidArgument("SVM train: labels must be 0 or 1");
    if (std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels[0]; }))
        throw InvalidArgument("SVM train: single-class input");

    const double orient = labels[0] == 1 ? 1.0 : -1.0;
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = labels[i] == labels[0] ? 1.0 : -1.0;

    const double c = cfg.c;
    const double gamma = cfg.gamma ? *cfg.gamma : scale_gamma(x);
    const double eps = 0.5 * cfg.tol;
    const std::size_t max_iter = cfg.max_iterations ? cfg.max_iterations : std::max<std::size_t>(10'000'000, 100 * m);

    const auto order = seeded_permutation(m, cfg.seed);
    KernelCache cache(x, gamma);
    std::vector<double> alpha(m, 0.0), grad(m, -1.0);
    auto upper = [&](std::size_t t) { return alpha[t] >= c; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    bool converged = false;
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        // i: maximal violator in I_up.
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = m;
        for (std::size_t t : order) {
            const double v = -y[t] * grad[t];
            const bool in_up = y[t] > 0 ? !upper(t) : !lower(t);
            if (in_up && v > gmax) {
                gmax = v;
                i = t;
            }
        }
        if (i == m) {
            converged = true;
            break;
        }
        const auto& ki = cache.row(i);
        // j: best second-order gain in I_low.
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        std::size_t j = m;
        for (std::size_t t : order) {
            const bool in_low = y[t] > 0 ? !lower(t) : !upper(t);
            if (!in_low) continue;
            const double v = y[t] * grad[t];
            gmax2 = std::max(gmax2, v);
            const double gain = gmax + v;
            if (gain > 0) {
                double quad = 2.0 - 2.0 * ki[t];  // K_ii + K_tt - 2 K_it with K_ii = 1
                if (quad <= 0) quad = kTau;
                const double obj = -(gain * gain) / quad;
                if (obj < best) {
                    best = obj;
                    j = t;
                }
            }
        }
        if (gmax + gmax2 < eps || j == m) {
            converged = true;
            break;
        }
        const auto& kj = cache.row(j);

        const double old_i = alpha[i], old_j = alpha[j];
        if (y[i] != y[j]) {
            double quad = 2.0 + 2.0 * (y[i] * y[j] * ki[j]);
            if (quad <= 0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
            }
            if (diff > 0) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
            } else {
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
            }
        } else {
            double quad = 2.0 - 2.0 * (y[i] * y[j] * ki[j]);
            if (quad <= 0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
            } else {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
            }
        }
        const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < m; ++t) grad[t] += y[t] * (y[i] * ki[t] * di + y[j] * kj[t] * dj);
    }

    // rho: average over free vectors, else midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < m; ++t) {
        const double yg = y[t] * grad[t];
        if (upper(t)) {
            if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    const double rho = free_count ? free_sum / static_cast<double>(free_count) : 0.5 * (ub + lb);

    SvmModel model;
    model.config = cfg;
    model.gamma_rbf = gamma;
    model.converged = converged;
    model.iterations = iter;
    model.bias = -orient * rho;
    for (std::size_t t = 0; t < m; ++t)
        if (alpha[t] > 0) model.support_indices.push_back(t);
    model.support_vectors = x.select_rows(model.support_indices);
    for (std::size_t t : model.support_indices) model.dual_coefs.push_back(orient * alpha[t] * y[t]);
    return model;
}

Prediction predict(const SvmModel& model, const Matrix& x) {
    if (x.cols() != model.support_vectors.cols())
        throw DimensionError("SVM predict: input has " + std::to_string(x.cols()) + " features, model expects " +
                             std::to_string(model.support_vectors.cols()));
    Prediction p;
    p.labels.resize(x.rows());
    p.decision.resize(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        p.decision[i] = model.decision(x.row(i));
        p.labels[i] = p.decision[i] > 0 ? 1 : 0;
    }
    return p;
}

double dual_objective(const SvmModel& model) {
    const std::size_t s = model.dual_coefs.size();
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        linear += std::abs(model.dual_coefs[i]);
        for (std::size_t j = 0; j < s; ++j)
            quad += model.dual_coefs[i] * model.dual_coefs[j] *
                    rbf_kernel(model.support_vectors.row(i), model.support_vectors.row(j), model.gamma_rbf);
    }
    return linear - 0.5 * quad;
}

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw DimensionError("accuracy: length mismatch");
    if (truth.empty()) throw InvalidArgument("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace qcov::svm
