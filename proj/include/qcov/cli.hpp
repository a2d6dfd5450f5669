#ifndef QCOV_CLI_HPP
#define QCOV_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "qcov/error.hpp"
#include "qcov/experiment.hpp"

namespace qcov::cli {

/// Bad flags or configuration; reported before any file is touched.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Everything a command needs. Loaded from a JSON config (or a previous run's
/// manifest), then overridden by command-line flags.
struct RunConfig {
    std::filesystem::path data;  // cube (.npy) when `gt` is set, else a flat dataset
    std::filesystem::path gt;
    std::set<int> classes;
    std::vector<std::string> tasks = {"3/10", "2/11", "5/8"};
    std::vector<std::string> schemes = {"CL", "UC", "UC-skip", "C", "HC"};
    std::vector<std::size_t> components = {2, 3, 4, 5, 10};
    double gamma = 0.0;  // centering strength for `eigen`
    double hc_gamma = Scheme::kDefaultHcGamma;
    std::vector<double> gamma_grid;  // empty: default grid
    std::size_t folds = 5;
    bool stratified = true;
    std::string svm_gamma = "scale";
    double svm_c = 1.0;
    double svm_tol = 1e-3;
    std::size_t svm_max_iterations = 0;
    bool export_matrices = false;
    std::filesystem::path out = "results";
    std::uint64_t seed = 0;
    std::size_t workers = 0;  // 0: all available cores

    /// JSON form used for config files and the manifest's "config" entry.
    std::string to_json() const;
};

/// Reads a config file. A manifest written by a previous run is accepted too.
RunConfig load_config(const std::filesystem::path& path);
/// Applies keys present in `json_text` on top of `base`.
RunConfig merge_config(RunConfig base, const std::string& json_text);

std::vector<ClassPairTask> parse_tasks(const RunConfig& cfg);
std::vector<Scheme> parse_schemes(const RunConfig& cfg);
svm::SvmConfig make_svm_config(const RunConfig& cfg);
CvConfig make_cv_config(const RunConfig& cfg);

/// Loads the dataset named by the config; for cubes only pixels of the
/// requested classes are kept.
SpectralDataset load_input(const RunConfig& cfg, const std::set<int>& needed_classes);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

// Commands return the process exit code: 0 on full success, 1 when a cell or
// file operation failed. UsageError propagates to the caller.
int cmd_convert(const RunConfig& cfg, std::ostream& out);
int cmd_eigen(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_classify(const RunConfig& cfg, std::ostream& out);

}  // namespace qcov::cli

#endif  // QCOV_CLI_HPP
