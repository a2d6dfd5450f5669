#include "qcov/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcov/error.hpp"

namespace qcov {

namespace {

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

template <typename T>
void write_vector(std::ostream& out, const char* key, const std::vector<T>& v) {
    out << key;
    for (const auto& x : v) out << ',' << format_real(static_cast<double>(x));
    out << '\n';
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_scientific(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_scientific(m(i, j));
        }
        out << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& r) {
    out << "index,lambda_q,lambda_rho\n";
    for (std::size_t k = 0; k < r.q.dim(); ++k)
        out << k << ',' << format_real(r.q.eigenvalues[k]) << ',' << format_real(r.rho.eigenvalues[k]) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "gamma,mu_norm,fid_q1_rho0,fid_q1_rho1,overlap_q1_rho0,overlap_q1_rho1\n";
    for (const auto& r : records)
        out << format_real(r.gamma) << ',' << format_real(r.mu_norm) << ',' << format_real(r.fid_q1_rho0) << ','
            << format_real(r.fid_q1_rho1) << ',' << format_real(r.overlap_q1_rho0) << ','
            << format_real(r.overlap_q1_rho1) << '\n';
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "task,scheme,n_components,train_mean,train_std,test_mean,test_std,folds,status\n";
    for (const auto& r : report.rows) {
        std::string status = r.status;
        for (char& c : status)
            if (c == ',' || c == '\n') c = ';';
        out << r.task.name() << ',' << r.scheme.name() << ',' << r.n_components << ',' << format_real(r.train_mean)
            << ',' << format_real(r.train_std) << ',' << format_real(r.test_mean) << ',' << format_real(r.test_std)
            << ',' << r.folds << ',' << status << '\n';
    }
}

std::string format_cell(double mean, double std) {
    if (std::isnan(mean)) return "failed";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f(%.2f)", mean, std);
    return buf;
}

std::string render_table(const ExperimentReport& report) {
    // Column order follows first appearance in the report.
    std::vector<std::string> schemes;
    std::vector<std::string> tasks;
    for (const auto& r : report.rows) {
        if (std::find(schemes.begin(), schemes.end(), r.scheme.name()) == schemes.end())
            schemes.push_back(r.scheme.name());
        if (std::find(tasks.begin(), tasks.end(), r.task.name()) == tasks.end()) tasks.push_back(r.task.name());
    }
    constexpr std::size_t kCell = 12;
    std::ostringstream out;
    out << pad("Task", 6) << pad("n", 4);
    for (const auto& s : schemes) out << "| " << pad(s, 2 * kCell);
    out << '\n' << pad("", 10);
    for (std::size_t i = 0; i < schemes.size(); ++i) out << "| " << pad("Train", kCell) << pad("Test", kCell);
    out << '\n';
    for (const auto& t : tasks) {
        std::vector<std::size_t> ks;
        for (const auto& r : report.rows)
            if (r.task.name() == t && std::find(ks.begin(), ks.end(), r.n_components) == ks.end())
                ks.push_back(r.n_components);
        bool first = true;
        for (auto k : ks) {
            out << pad(first ? t : "", 6) << pad(std::to_string(k), 4);
            first = false;
            for (const auto& s : schemes) {
                const ReportRow* row = nullptr;
                for (const auto& r : report.rows)
                    if (r.task.name() == t && r.scheme.name() == s && r.n_components == k) row = &r;
                if (!row || !row->ok()) {
                    out << "| " << pad("failed", kCell) << pad("failed", kCell);
                } else {
                    out << "| " << pad(format_cell(row->train_mean, row->train_std), kCell)
                        << pad(format_cell(row->test_mean, row->test_std), kCell);
                }
            }
            out << '\n';
        }
    }
    return out.str();
}

void write_pca_model(std::ostream& out, const PcaModel& model) {
    out << "scheme," << model.scheme.name() << '\n';
    out << "n_components," << model.component_count << '\n';
    out << "skip_first," << (model.skip_first ? 1 : 0) << '\n';
    out << "gamma," << format_real(model.pipeline.config().gamma()) << '\n';
    out << "standardize," << (model.pipeline.config().standardize ? 1 : 0) << '\n';
    out << "l2_normalize," << (model.pipeline.config().l2_normalize ? 1 : 0) << '\n';
    out << "fitted_on," << model.stats().fitted_on << '\n';
    write_vector(out, "means", model.stats().means);
    write_vector(out, "stds", model.stats().stds);
    write_vector(out, "eigenvalues", model.eigenvalues);
    out << "basis\n";
    write_matrix_csv(out, model.basis);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace qcov
