#include "qcov/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qcov/error.hpp"

namespace qcov {

namespace {

constexpr double kSymmetryTolerance = 1e-9;
constexpr double kUnitTolerance = 1e-9;

void check_unit(std::span<const double> v, const char* what) {
    const double n = std::sqrt(dot(v, v));
    if (std::abs(n - 1.0) > kUnitTolerance)
        throw InvalidArgument(std::string(what) + ": vector has norm " + std::to_string(n) + ", expected 1");
}

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
}

// Flip so the largest-magnitude entry (first one on ties) is positive.
void fix_sign(std::span<double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    if (v[best] < 0)
        for (double& x : v) x = -x;
}

}  // namespace

EigenDecomposition eigendecompose(const Matrix& input, std::string source) {
    const std::size_t n = input.rows();
    if (input.cols() != n) throw DimensionError("eigendecompose: matrix is not square");
    if (n == 0) throw DimensionError("eigendecompose: empty matrix");

    double scale = 0.0, frob = 0.0;
    for (double v : input.data()) {
        if (!std::isfinite(v)) throw InvalidArgument("eigendecompose: non-finite entry");
        scale = std::max(scale, std::abs(v));
        frob += v * v;
    }
    frob = std::sqrt(frob);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(input(i, j) - input(j, i)) > kSymmetryTolerance * std::max(1.0, scale))
                throw InvalidArgument("eigendecompose: matrix is not symmetric");

    // Working copy, symmetrized. Rows of `vt` are the eigenvectors being
    // accumulated, so each rotation touches two contiguous rows.
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (input(i, j) + input(j, i));
    std::vector<double> vt(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

    const double threshold = kJacobiTolerance * frob;
    int sweep = 0;
    while (off_diagonal_norm(a, n) > threshold) {
        if (sweep == kJacobiMaxSweeps)
            throw NumericalError("eigendecompose: no convergence after " + std::to_string(kJacobiMaxSweeps) + " sweeps");
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                double* rp = &a[p * n];
                double* rq = &a[q * n];
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double g = rp[r], h = rq[r];
                    rp[r] = g - s * (h + g * tau);
                    rq[r] = h + s * (g - h * tau);
                    a[r * n + p] = rp[r];
                    a[r * n + q] = rq[r];
                }
                rp[p] = app - t * apq;
                rq[q] = aqq + t * apq;
                rp[q] = 0.0;
                rq[p] = 0.0;

                double* vp = &vt[p * n];
                double* vq = &vt[q * n];
                for (std::size_t r = 0; r < n; ++r) {
                    const double g = vp[r], h = vq[r];
                    vp[r] = g - s * (h + g * tau);
                    vq[r] = h + s * (g - h * tau);
                }
            }
        }
    }

    for (std::size_t k = 0; k < n; ++k) fix_sign(std::span<double>(&vt[k * n], n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double lx = a[x * n + x], ly = a[y * n + y];
        if (lx != ly) return lx > ly;
        return std::lexicographical_compare(vt.begin() + x * n, vt.begin() + (x + 1) * n, vt.begin() + y * n,
                                            vt.begin() + (y + 1) * n);
    });

    EigenDecomposition d;
    d.source = std::move(source);
    d.sweeps = sweep;
    d.eigenvalues.resize(n);
    d.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        d.eigenvalues[k] = a[src * n + src];
        for (std::size_t r = 0; r < n; ++r) d.eigenvectors(r, k) = vt[src * n + r];
    }
    return d;
}

double fidelity(std::span<const double> v, std::span<const double> w) {
    check_unit(v, "fidelity");
    check_unit(w, "fidelity");
    const double o = dot(v, w);
    return std::clamp(o * o, 0.0, 1.0);
}

double overlap(std::span<const double> v, std::span<const double> w) {
    check_unit(v, "overlap");
    check_unit(w, "overlap");
    return std::clamp(std::abs(dot(v, w)), 0.0, 1.0);
}

double subspace_fidelity(std::span<const double> v, const EigenDecomposition& d, std::span<const std::size_t> columns) {
    check_unit(v, "subspace_fidelity");
    if (v.size() != d.dim()) throw DimensionError("subspace_fidelity: dimension mismatch");
    double total = 0.0;
    for (std::size_t k : columns) {
        if (k >= d.dim()) throw InvalidArgument("subspace_fidelity: column index out of range");
        double o = 0.0;
        for (std::size_t r = 0; r < v.size(); ++r) o += v[r] * d.eigenvectors(r, k);
        total += o * o;
    }
    return std::clamp(total, 0.0, 1.0);
}

SpectrumComparison compare_spectra(const EigenDecomposition& dq, const EigenDecomposition& drho, int shift) {
    if (shift != 0 && shift != 1) throw InvalidArgument("compare_spectra: shift must be 0 or 1");
    if (dq.dim() != drho.dim()) throw DimensionError("compare_spectra: spectra differ in dimension");
    SpectrumComparison out;
    out.lambda_q = dq.eigenvalues;
    out.lambda_rho = drho.eigenvalues;
    out.shift = shift;
    const std::size_t n = dq.dim();
    const double lead = dq.eigenvalues.empty() ? 0.0 : dq.eigenvalues[0];
    const double denom = std::max(lead, std::numeric_limits<double>::min());
    for (std::size_t k = 0; k + static_cast<std::size_t>(shift) < n; ++k) {
        if (dq.eigenvalues[k] < kSpectrumFloor * lead) continue;
        const double diff = std::abs(drho.eigenvalues[k + shift] - dq.eigenvalues[k]) / denom;
        out.max_rel_diff = std::max(out.max_rel_diff, diff);
        ++out.compared;
    }
    return out;
}

}  // namespace qcov
