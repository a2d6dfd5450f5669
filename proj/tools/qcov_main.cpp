#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcov/cli.hpp"

namespace {

struct Flags {
    std::string config, data, gt, out, svm_gamma;
    std::vector<int> classes;
    std::vector<std::string> tasks, schemes;
    std::vector<std::size_t> components;
    std::vector<double> grid;
    std::optional<double> gamma, hc_gamma, svm_c;
    std::optional<std::size_t> folds, workers;
    std::optional<std::uint64_t> seed;
    bool export_matrices = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config file or manifest from an earlier run");
    cmd->add_option("--data", f.data, "Cube .npy (with --gt), flat dataset CSV, or NPY dataset prefix");
    cmd->add_option("--gt", f.gt, "Ground-truth label map .npy");
    cmd->add_option("--out", f.out, "Output path");
    cmd->add_option("--seed", f.seed, "Seed for folds and SVM tie-breaking");
    cmd->add_option("--workers", f.workers, "Worker threads (0: all cores)");
    cmd->add_option("--classes", f.classes, "Class ids to keep from a cube, e.g. 2,3,5")->delimiter(',');
}

void add_task(CLI::App* cmd, Flags& f) {
    cmd->add_option("--tasks", f.tasks, "Class pairs such as 3/10")->delimiter(',');
}

qcov::cli::RunConfig resolve(const Flags& f) {
    qcov::cli::RunConfig cfg = f.config.empty() ? qcov::cli::RunConfig{} : qcov::cli::load_config(f.config);
    if (!f.data.empty()) cfg.data = f.data;
    if (!f.gt.empty()) cfg.gt = f.gt;
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.classes.empty()) cfg.classes = {f.classes.begin(), f.classes.end()};
    if (!f.tasks.empty()) cfg.tasks = f.tasks;
    if (!f.schemes.empty()) cfg.schemes = f.schemes;
    if (!f.components.empty()) cfg.components = f.components;
    if (!f.grid.empty()) cfg.gamma_grid = f.grid;
    if (f.gamma) cfg.gamma = *f.gamma;
    if (f.hc_gamma) cfg.hc_gamma = *f.hc_gamma;
    if (f.svm_c) cfg.svm_c = *f.svm_c;
    if (!f.svm_gamma.empty()) cfg.svm_gamma = f.svm_gamma;
    if (f.folds) cfg.folds = *f.folds;
    if (f.workers) cfg.workers = *f.workers;
    if (f.seed) cfg.seed = *f.seed;
    if (f.export_matrices) cfg.export_matrices = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covariance spectra, centering sweeps and PCA+SVM classification for hyperspectral data"};
    app.set_version_flag("--version", std::string(QCOV_VERSION));
    app.require_subcommand(1);
    Flags f;

    auto* convert = app.add_subcommand("convert", "Flatten a labelled cube into a dataset of selected classes");
    add_common(convert, f);

    auto* eigen = app.add_subcommand("eigen", "Spectra of Q and rho_bar for one task at one centering strength");
    add_common(eigen, f);
    add_task(eigen, f);
    eigen->add_option("--gamma", f.gamma, "Centering strength in [0, 1]");
    eigen->add_flag("--export-matrices", f.export_matrices, "Also write Q and rho_bar as CSV");

    auto* sweep = app.add_subcommand("sweep", "Leading-eigenvector fidelities over a centering grid");
    add_common(sweep, f);
    add_task(sweep, f);
    sweep->add_option("--grid", f.grid, "Centering values, e.g. 0,0.5,1")->delimiter(',');

    auto* classify = app.add_subcommand("classify", "Cross-validated PCA+SVM accuracy table");
    add_common(classify, f);
    add_task(classify, f);
    classify->add_option("--schemes", f.schemes, "Subset of CL, UC, UC-skip, C, HC")->delimiter(',');
    classify->add_option("--components", f.components, "Retained component counts")->delimiter(',');
    classify->add_option("--folds", f.folds, "Cross-validation folds");
    classify->add_option("--hc-gamma", f.hc_gamma, "Centering strength of the HC scheme");
    classify->add_option("--svm-c", f.svm_c, "SVM box constraint");
    classify->add_option("--svm-gamma", f.svm_gamma, "RBF width: 'scale' or a positive number");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const auto cfg = resolve(f);
        if (*convert) return qcov::cli::cmd_convert(cfg, std::cout);
        if (*eigen) return qcov::cli::cmd_eigen(cfg, std::cout);
        if (*sweep) return qcov::cli::cmd_sweep(cfg, std::cout);
        return qcov::cli::cmd_classify(cfg, std::cout);
    } catch (const qcov::cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
