#include "qcov/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qcov/export.hpp"

namespace qcov::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t resolve_workers(std::size_t w) {
    if (w) return w;
    return std::max(1u, std::thread::hardware_concurrency());
}

template <typename T>
void take(const json& j, const char* key, T& dst) {
    if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

void require_file(const fs::path& p, const char* what) {
    if (p.empty()) throw UsageError(std::string("no ") + what + " given");
    if (!fs::is_regular_file(p)) throw Error(std::string(what) + " not found: '" + p.string() + "'");
}

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string gamma_tag(double g) {
    std::string s = fmt(g, "%.4f");
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

std::vector<fs::path> input_files(const RunConfig& cfg) {
    std::vector<fs::path> files;
    if (!cfg.gt.empty()) {
        files = {cfg.data, cfg.gt};
    } else if (cfg.data.extension() == ".csv" || (fs::is_regular_file(cfg.data) && cfg.data.extension() != ".npy")) {
        files = {cfg.data};
    } else {
        std::string base = cfg.data.string();
        for (const char* suf : {".npy", ".samples"})
            if (base.size() > std::strlen(suf) && base.ends_with(suf)) base.resize(base.size() - std::strlen(suf));
        files = {base + ".samples.npy", base + ".labels.npy"};
    }
    return files;
}

void check_inputs(const RunConfig& cfg) {
    if (cfg.data.empty()) throw UsageError("no input data given (use --data)");
    for (const auto& f : input_files(cfg)) require_file(f, "input file");
}

json manifest(const std::string& command, const RunConfig& cfg, const std::vector<std::string>& outputs) {
    json j;
    j["command"] = command;
    j["artifact_version"] = QCOV_VERSION;
    j["seed"] = cfg.seed;
    j["config"] = json::parse(cfg.to_json());
    json inputs = json::array();
    for (const auto& f : input_files(cfg)) inputs.push_back({{"path", f.string()}, {"fnv1a64", file_hash(f)}});
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    return j;
}

std::set<int> task_classes(const std::vector<ClassPairTask>& tasks) {
    std::set<int> s;
    for (const auto& t : tasks) {
        s.insert(t.class_a());
        s.insert(t.class_b());
    }
    return s;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec || !fs::is_directory(cfg.out)) throw Error("cannot create output directory '" + cfg.out.string() + "'");
    return cfg.out;
}

void validate_gamma(double g, const char* what) {
    if (!(g >= 0.0 && g <= 1.0)) throw UsageError(std::string(what) + " must lie in [0, 1], got " + fmt(g));
}

}  // namespace

std::string RunConfig::to_json() const {
    json j;
    j["data"] = {{"path", data.string()}, {"gt", gt.string()}, {"classes", classes}};
    j["tasks"] = tasks;
    j["schemes"] = schemes;
    j["components"] = components;
    j["centering"] = {{"gamma", gamma}, {"hc_gamma", hc_gamma}, {"grid", gamma_grid}};
    j["cv"] = {{"folds", folds}, {"stratified", stratified}};
    j["svm"] = {{"c", svm_c}, {"gamma", svm_gamma}, {"tol", svm_tol}, {"max_iterations", svm_max_iterations}};
    j["output"] = {{"dir", out.string()}, {"export_matrices", export_matrices}};
    j["seed"] = seed;
    j["workers"] = workers;
    return j.dump(2);
}

RunConfig merge_config(RunConfig cfg, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (j.contains("config") && j.contains("artifact_version")) j = j.at("config");  // a manifest
    try {
        if (j.contains("data")) {
            const auto& d = j.at("data");
            std::string path = cfg.data.string(), gt = cfg.gt.string();
            take(d, "path", path);
            take(d, "gt", gt);
            cfg.data = path;
            cfg.gt = gt;
            take(d, "classes", cfg.classes);
        }
        take(j, "tasks", cfg.tasks);
        take(j, "schemes", cfg.schemes);
        take(j, "components", cfg.components);
        if (j.contains("centering")) {
            const auto& c = j.at("centering");
            take(c, "gamma", cfg.gamma);
            take(c, "hc_gamma", cfg.hc_gamma);
            take(c, "grid", cfg.gamma_grid);
        }
        if (j.contains("cv")) {
            take(j.at("cv"), "folds", cfg.folds);
            take(j.at("cv"), "stratified", cfg.stratified);
        }
        if (j.contains("svm")) {
            const auto& s = j.at("svm");
            take(s, "c", cfg.svm_c);
            if (s.contains("gamma")) {
                const auto& g = s.at("gamma");
                cfg.svm_gamma = g.is_number() ? fmt(g.get<double>(), "%.17g") : g.get<std::string>();
            }
            take(s, "tol", cfg.svm_tol);
            take(s, "max_iterations", cfg.svm_max_iterations);
        }
        if (j.contains("output")) {
            std::string dir = cfg.out.string();
            take(j.at("output"), "dir", dir);
            cfg.out = dir;
            take(j.at("output"), "export_matrices", cfg.export_matrices);
        }
        take(j, "seed", cfg.seed);
        take(j, "workers", cfg.workers);
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return merge_config(RunConfig{}, ss.str());
}

std::vector<ClassPairTask> parse_tasks(const RunConfig& cfg) {
    if (cfg.tasks.empty()) throw UsageError("no tasks given");
    std::vector<ClassPairTask> out;
    try {
        for (const auto& t : cfg.tasks) out.push_back(ClassPairTask::parse(t));
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return out;
}

std::vector<Scheme> parse_schemes(const RunConfig& cfg) {
    if (cfg.schemes.empty()) throw UsageError("no schemes given; valid schemes: " + Scheme::valid_names());
    validate_gamma(cfg.hc_gamma, "HC gamma");
    std::vector<Scheme> out;
    try {
        for (const auto& s : cfg.schemes) out.push_back(Scheme::parse(s, cfg.hc_gamma));
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return out;
}

svm::SvmConfig make_svm_config(const RunConfig& cfg) {
    svm::SvmConfig s;
    s.c = cfg.svm_c;
    s.tol = cfg.svm_tol;
    s.max_iterations = cfg.svm_max_iterations;
    s.seed = cfg.seed;
    if (cfg.svm_gamma != "scale") {
        try {
            std::size_t used = 0;
            s.gamma = std::stod(cfg.svm_gamma, &used);
            if (used != cfg.svm_gamma.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw UsageError("SVM gamma must be 'scale' or a positive number, got '" + cfg.svm_gamma + "'");
        }
    }
    try {
        s.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return s;
}

CvConfig make_cv_config(const RunConfig& cfg) {
    if (cfg.folds < 2) throw UsageError("need at least 2 folds");
    return {cfg.folds, cfg.seed, cfg.stratified};
}

SpectralDataset load_input(const RunConfig& cfg, const std::set<int>& needed_classes) {
    check_inputs(cfg);
    if (!cfg.gt.empty()) {
        std::set<int> keep = needed_classes;
        keep.insert(cfg.classes.begin(), cfg.classes.end());
        return flatten_cube(load_cube(cfg.data, cfg.gt), keep, cfg.data.string());
    }
    return load_dataset(cfg.data);
}

std::string file_hash(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

int cmd_convert(const RunConfig& cfg, std::ostream& out) {
    if (cfg.classes.empty()) throw UsageError("convert needs a non-empty --classes list");
    if (cfg.gt.empty()) throw UsageError("convert needs both --data (cube) and --gt (ground truth)");
    if (cfg.out.empty()) throw UsageError("convert needs --out");
    check_inputs(cfg);

    const auto ds = flatten_cube(load_cube(cfg.data, cfg.gt), cfg.classes, cfg.data.string());
    std::vector<std::string> outputs;
    if (cfg.out.extension() == ".csv") {
        save_dataset_csv(cfg.out, ds);
        outputs.push_back(cfg.out.string());
    } else {
        save_dataset_npy(cfg.out, ds);
        outputs.push_back(cfg.out.string() + ".samples.npy");
        outputs.push_back(cfg.out.string() + ".labels.npy");
    }
    json meta = manifest("convert", cfg, outputs);
    json counts = json::object();
    for (const auto& [cls, n] : ds.class_counts()) counts[std::to_string(cls)] = n;
    meta["class_counts"] = counts;
    meta["band_count"] = ds.band_count();
    meta["sample_count"] = ds.size();
    const fs::path meta_path = cfg.out.string() + ".meta.json";
    write_file(meta_path, meta.dump(2) + "\n");

    out << "wrote " << ds.size() << " samples x " << ds.band_count() << " bands to " << outputs.front() << '\n';
    for (const auto& [cls, n] : ds.class_counts()) out << "  class " << cls << ": " << n << '\n';
    return 0;
}

int cmd_eigen(const RunConfig& cfg, std::ostream& out) {
    validate_gamma(cfg.gamma, "gamma");
    const auto tasks = parse_tasks(cfg);
    check_inputs(cfg);
    const auto& task = tasks.front();
    const auto ds = load_input(cfg, task_classes({task}));
    const auto dir = prepare_out_dir(cfg);

    const auto report = run_spectrum_report(ds, task, cfg.gamma);
    const std::string tag = gamma_tag(cfg.gamma);
    std::vector<std::string> outputs;
    {
        std::ostringstream csv;
        write_spectrum_csv(csv, report);
        const auto p = dir / ("spectrum_gamma" + tag + ".csv");
        write_file(p, csv.str());
        outputs.push_back(p.string());
    }
    if (cfg.export_matrices) {
        const auto pair = build_pair(preprocess_subset(ds, task, cfg.gamma));
        for (const auto& [name, m] : {std::pair<std::string, const Matrix*>{"q", &pair.q}, {"rho_bar", &pair.rho_bar}}) {
            std::ostringstream csv;
            write_matrix_csv(csv, *m);
            const auto p = dir / (name + "_gamma" + tag + ".csv");
            write_file(p, csv.str());
            outputs.push_back(p.string());
        }
    }
    std::ostringstream summary;
    summary << "task " << task.name() << ", gamma " << fmt(cfg.gamma) << ", bands " << ds.band_count()
            << ", ||mu|| " << fmt(report.mu_norm) << '\n';
    for (const auto* c : {&report.shift0, &report.shift1})
        summary << "shift " << c->shift << ": max_rel_diff " << fmt(c->max_rel_diff, "%.6e") << " over " << c->compared
                << " eigenvalues\n";
    const auto sp = dir / ("spectrum_gamma" + tag + "_summary.txt");
    write_file(sp, summary.str());
    outputs.push_back(sp.string());
    write_file(dir / "manifest.json", manifest("eigen", cfg, outputs).dump(2) + "\n");
    out << summary.str();
    return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    for (double g : cfg.gamma_grid) validate_gamma(g, "grid value");
    const auto tasks = parse_tasks(cfg);
    check_inputs(cfg);
    const auto& task = tasks.front();
    const auto ds = load_input(cfg, task_classes({task}));
    const auto dir = prepare_out_dir(cfg);

    const auto grid = cfg.gamma_grid.empty() ? default_gamma_grid() : cfg.gamma_grid;
    const auto records = run_gamma_sweep(ds, task, grid, resolve_workers(cfg.workers));
    std::ostringstream csv;
    write_sweep_csv(csv, records);
    const auto p = dir / "sweep.csv";
    write_file(p, csv.str());

    std::ostringstream summary;
    summary << "task " << task.name() << ", " << records.size() << " grid points, ||mu|| range ["
            << fmt(records.back().mu_norm) << ", " << fmt(records.front().mu_norm) << "]\n";
    if (const auto c = find_crossing(records))
        summary << "crossing: gamma* = " << fmt(c->gamma) << ", ||mu||(gamma*) = " << fmt(c->mu_norm) << '\n';
    else
        summary << "crossing: none\n";
    const auto sp = dir / "sweep_summary.txt";
    write_file(sp, summary.str());
    write_file(dir / "manifest.json", manifest("sweep", cfg, {p.string(), sp.string()}).dump(2) + "\n");
    out << summary.str();
    return 0;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const auto tasks = parse_tasks(cfg);
    const auto schemes = parse_schemes(cfg);
    if (cfg.components.empty()) throw UsageError("no component counts given");
    const auto svm_cfg = make_svm_config(cfg);
    const auto cv = make_cv_config(cfg);
    check_inputs(cfg);
    const auto ds = load_input(cfg, task_classes(tasks));
    const auto dir = prepare_out_dir(cfg);

    const auto report = run_classification(ds, tasks, schemes, cfg.components, cv, svm_cfg, resolve_workers(cfg.workers));
    std::ostringstream csv;
    write_report_csv(csv, report);
    const auto rp = dir / "report.csv";
    write_file(rp, csv.str());
    const std::string table = render_table(report);
    const auto tp = dir / "table.txt";
    write_file(tp, table);
    write_file(dir / "manifest.json", manifest("classify", cfg, {rp.string(), tp.string()}).dump(2) + "\n");
    out << table;
    for (const auto& r : report.rows)
        if (!r.ok()) out << "cell " << r.task.name() << ' ' << r.scheme.name() << " n=" << r.n_components << ": " << r.status << '\n';
    return report.all_ok() ? 0 : 1;
}

}  // namespace qcov::cli
