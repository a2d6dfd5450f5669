#include "qcov/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <tuple>

#include "parallel.hpp"
#include "qcov/error.hpp"
#include "qcov/random.hpp"

namespace qcov {

std::vector<Fold> make_folds(const std::vector<int>& labels, const CvConfig& cfg) {
    const std::size_t k = cfg.folds;
    if (k < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
    if (labels.size() < k)
        throw InvalidArgument("cannot split " + std::to_string(labels.size()) + " samples into " + std::to_string(k) +
                              " folds");

    // Groups are dealt round-robin; the starting fold carries over between
    // groups so overall fold sizes stay balanced too.
    std::vector<std::vector<std::size_t>> groups;
    if (cfg.stratified) {
        std::map<int, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
        for (auto& [cls, idx] : by_class) {
            if (idx.size() < k)
                throw InvalidArgument("class " + std::to_string(cls) + " has " + std::to_string(idx.size()) +
                                      " samples, fewer than " + std::to_string(k) + " folds");
            groups.push_back(std::move(idx));
        }
    } else {
        groups.emplace_back(labels.size());
        std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<Fold> folds(k);
    std::size_t offset = 0;
    for (auto& g : groups) {
        shuffle_in_place(g, rng);
        for (std::size_t p = 0; p < g.size(); ++p) folds[(offset + p) % k].test.push_back(g[p]);
        offset = (offset + g.size()) % k;
    }
    for (auto& f : folds) {
        std::sort(f.test.begin(), f.test.end());
        std::vector<bool> in_test(labels.size(), false);
        for (auto i : f.test) in_test[i] = true;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (!in_test[i]) f.train.push_back(i);
    }
    return folds;
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

bool ExperimentReport::all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.ok(); });
}

const ReportRow* ExperimentReport::find(const ClassPairTask& task, SchemeKind scheme, std::size_t k) const {
    for (const auto& r : rows)
        if (r.task == task && r.scheme.kind() == scheme && r.n_components == k) return &r;
    return nullptr;
}

namespace {

struct CellResult {
    bool ok = false;
    double train_acc = 0, test_acc = 0;
    std::string error;
};

struct TaskData {
    std::unique_ptr<SpectralDataset> subset;
    std::vector<Fold> folds;
    std::string error;
};

}  // namespace

ExperimentReport run_classification(const SpectralDataset& ds, const std::vector<ClassPairTask>& tasks,
                                    const std::vector<Scheme>& schemes, const std::vector<std::size_t>& ks,
                                    const CvConfig& cv, const svm::SvmConfig& svm_cfg, std::size_t workers) {
    svm_cfg.validate();
    const std::size_t nt = tasks.size(), ns = schemes.size(), nk = ks.size(), nf = cv.folds;

    std::vector<TaskData> task_data(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        try {
            auto subset = std::make_unique<SpectralDataset>(select_pair(ds, tasks[t]));
            task_data[t].folds = make_folds(subset->labels(), cv);
            task_data[t].subset = std::move(subset);
        } catch (const std::exception& e) {
            task_data[t].error = e.what();
        }
    }

    // results[((t * nf + f) * ns + s) * nk + k]
    std::vector<CellResult> results(nt * nf * ns * nk);
    detail::parallel_for(nt * nf * ns, workers, [&](std::size_t unit) {
        const std::size_t s = unit % ns, f = (unit / ns) % nf, t = unit / (ns * nf);
        CellResult* out = &results[unit * nk];
        const auto& td = task_data[t];
        if (!td.subset) {
            for (std::size_t k = 0; k < nk; ++k) out[k].error = td.error;
            return;
        }
        const auto& fold = td.folds[f];
        const Matrix train_x = td.subset->samples().select_rows(fold.train);
        const Matrix test_x = td.subset->samples().select_rows(fold.test);
        std::vector<int> train_y, test_y;
        for (auto i : fold.train) train_y.push_back(td.subset->labels()[i]);
        for (auto i : fold.test) test_y.push_back(td.subset->labels()[i]);

        std::unique_ptr<PcaSpectrum> spectrum;
        Matrix train_p, test_p;
        try {
            spectrum = std::make_unique<PcaSpectrum>(fit_spectrum(train_x, schemes[s]));
            train_p = spectrum->pipeline.apply(train_x);
            test_p = spectrum->pipeline.apply(test_x);
        } catch (const std::exception& e) {
            for (std::size_t k = 0; k < nk; ++k) out[k].error = e.what();
            return;
        }
        for (std::size_t k = 0; k < nk; ++k) {
            try {
                const auto model = select_components(*spectrum, ks[k]);
                const Matrix ztr = multiply(train_p, model.basis);
                const Matrix zte = multiply(test_p, model.basis);
                const auto clf = svm::train(ztr, train_y, svm_cfg);
                out[k].train_acc = svm::accuracy(train_y, svm::predict(clf, ztr).labels);
                out[k].test_acc = svm::accuracy(test_y, svm::predict(clf, zte).labels);
                out[k].ok = true;
            } catch (const std::exception& e) {
                out[k].error = e.what();
            }
        }
    });

    ExperimentReport report;
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t k = 0; k < nk; ++k) {
                ReportRow row{tasks[t], schemes[s], ks[k]};
                std::vector<double> tr, te;
                std::string first_error;
                for (std::size_t f = 0; f < nf; ++f) {
                    const auto& cell = results[((t * nf + f) * ns + s) * nk + k];
                    if (cell.ok) {
                        tr.push_back(cell.train_acc);
                        te.push_back(cell.test_acc);
                    } else if (first_error.empty()) {
                        first_error = cell.error.empty() ? "unknown error" : cell.error;
                    }
                }
                std::tie(row.train_mean, row.train_std) = mean_std(tr);
                std::tie(row.test_mean, row.test_std) = mean_std(te);
                row.folds = tr.size();
                if (!first_error.empty()) row.status = "failed: " + first_error;
                report.rows.push_back(std::move(row));
            }
    return report;
}

Matrix preprocess_subset(const SpectralDataset& ds, const ClassPairTask& task, double gamma) {
    const auto subset = select_pair(ds, task);
    const PipelineConfig cfg(true, gamma, true);
    return FittedPipeline::fit(subset.samples(), cfg).apply(subset.samples());
}

SpectrumReport run_spectrum_report(const SpectralDataset& ds, const ClassPairTask& task, double gamma) {
    const auto pair = build_pair(preprocess_subset(ds, task, gamma));
    SpectrumReport r;
    r.gamma = gamma;
    r.mu_norm = pair.mu_norm();
    r.q = eigendecompose(pair.q, "Q");
    r.rho = eigendecompose(pair.rho_bar, "rho_bar");
    r.shift0 = compare_spectra(r.q, r.rho, 0);
    r.shift1 = compare_spectra(r.q, r.rho, 1);
    return r;
}

std::vector<double> default_gamma_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
    for (int i = 0; i < 100; ++i) grid.push_back(0.9 + 0.1 * i / 99.0);
    std::sort(grid.begin(), grid.end());
    std::vector<double> out;
    for (double g : grid)
        if (out.empty() || g - out.back() > 1e-12) out.push_back(g);
    return out;
}

std::vector<SweepRecord> run_gamma_sweep(const SpectralDataset& ds, const ClassPairTask& task,
                                         std::vector<double> grid, std::size_t workers) {
    if (grid.empty()) throw InvalidArgument("gamma grid is empty");
    for (double g : grid)
        if (!(g >= 0.0 && g <= 1.0)) throw InvalidArgument("gamma grid value " + std::to_string(g) + " outside [0, 1]");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const auto subset = select_pair(ds, task);
    const FeatureStats stats = fit_stats(subset.samples());
    std::vector<SweepRecord> records(grid.size());
    detail::parallel_for(grid.size(), workers, [&](std::size_t i) {
        const FittedPipeline pipeline(PipelineConfig(true, grid[i], true), stats);
        const auto pair = build_pair(pipeline.apply(subset.samples()));
        const auto dq = eigendecompose(pair.q, "Q");
        const auto drho = eigendecompose(pair.rho_bar, "rho_bar");
        const auto q0 = dq.vector(0), r0 = drho.vector(0), r1 = drho.vector(1);
        records[i] = {grid[i], pair.mu_norm(), fidelity(q0, r0), fidelity(q0, r1), overlap(q0, r0), overlap(q0, r1)};
    });
    return records;
}

std::optional<Crossing> find_crossing(const std::vector<SweepRecord>& records) {
    if (records.size() < 2) throw InvalidArgument("find_crossing needs at least 2 records");
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& a = records[i];
        const double da = a.fid_q1_rho0 - a.fid_q1_rho1;
        if (da == 0.0) return Crossing{a.gamma, a.mu_norm};
        if (i + 1 == records.size()) break;
        const auto& b = records[i + 1];
        const double db = b.fid_q1_rho0 - b.fid_q1_rho1;
        if ((da < 0) != (db < 0) && db != 0.0) {
            const double t = da / (da - db);
            return Crossing{a.gamma + t * (b.gamma - a.gamma), a.mu_norm + t * (b.mu_norm - a.mu_norm)};
        }
    }
    return std::nullopt;
}

}  // namespace qcov
