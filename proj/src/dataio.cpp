#include "qcov/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "qcov/error.hpp"

namespace qcov {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::filesystem::path strip_suffix(const std::filesystem::path& p, std::string_view suffix) {
    const std::string s = p.string();
    if (s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0)
        return s.substr(0, s.size() - suffix.size());
    return p;
}

}  // namespace

SpectralDataset::SpectralDataset(Matrix samples, std::vector<int> labels, std::string source)
    : samples_(std::move(samples)), labels_(std::move(labels)), source_(std::move(source)) {
    if (samples_.rows() < 2 || samples_.cols() < 2)
        throw InvalidArgument("dataset needs at least 2 samples and 2 bands, got " + std::to_string(samples_.rows()) +
                              "x" + std::to_string(samples_.cols()));
    if (labels_.size() != samples_.rows())
        throw DimensionError("dataset has " + std::to_string(samples_.rows()) + " samples but " +
                             std::to_string(labels_.size()) + " labels");
    for (std::size_t i = 0; i < samples_.rows(); ++i)
        for (std::size_t j = 0; j < samples_.cols(); ++j)
            if (!std::isfinite(samples_(i, j)))
                throw InvalidArgument("non-finite value at sample " + std::to_string(i) + ", band " + std::to_string(j));
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] < 0) throw InvalidArgument("negative class id at sample " + std::to_string(i));
}

std::map<int, std::size_t> SpectralDataset::class_counts() const {
    std::map<int, std::size_t> counts;
    for (int l : labels_) ++counts[l];
    return counts;
}

HsiCube::HsiCube(std::size_t height, std::size_t width, std::size_t bands, std::vector<double> data,
                 std::vector<int> ground_truth)
    : height_(height), width_(width), bands_(bands), data_(std::move(data)), ground_truth_(std::move(ground_truth)) {
    if (bands_ < 1) throw InvalidArgument("cube needs at least one band");
    if (data_.size() != height_ * width_ * bands_)
        throw DimensionError("cube data size does not match H x W x B");
    if (ground_truth_.size() != height_ * width_)
        throw DimensionError("ground truth does not match the cube's spatial dimensions");
}

ClassPairTask::ClassPairTask(int class_a, int class_b) : a_(class_a), b_(class_b) {
    if (a_ == b_) throw InvalidArgument("class pair task needs two distinct classes, got " + name());
    if (a_ < 0 || b_ < 0) throw InvalidArgument("class ids must be non-negative");
}

ClassPairTask ClassPairTask::parse(const std::string& text) {
    const auto slash = text.find('/');
    int a = 0, b = 0;
    if (slash == std::string::npos || !parse_int(trim(text.substr(0, slash)), a) ||
        !parse_int(trim(text.substr(slash + 1)), b))
        throw InvalidArgument("task must look like 'A/B', got '" + text + "'");
    return ClassPairTask(a, b);
}

std::string ClassPairTask::name() const { return std::to_string(a_) + "/" + std::to_string(b_); }

npy::Array load_npy(const std::filesystem::path& path) { return npy::load(path); }

void write_npy(const std::filesystem::path& path, const npy::Array& array) { npy::save(path, array); }

SpectralDataset load_csv(const std::filesystem::path& path, bool has_header, LabelColumn label_column) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t width = 0;
    std::size_t line_no = 0;
    std::string line;
    bool skipped_header = !has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        const auto cells = split_commas(line);
        if (width == 0) {
            width = cells.size();
            if (width < 2) throw ParseError(path.string() + ": need at least one feature and one label column");
        } else if (cells.size() != width) {
            throw ParseError(path.string() + ": ragged row at line " + std::to_string(line_no) + " (" +
                             std::to_string(cells.size()) + " cells, expected " + std::to_string(width) + ")");
        }
        const std::size_t lc = label_column.value_or(width - 1);
        if (lc >= width) throw ParseError(path.string() + ": label column " + std::to_string(lc) + " out of range");
        for (std::size_t c = 0; c < width; ++c) {
            if (c == lc) {
                int l = 0;
                if (!parse_int(cells[c], l))
                    throw ParseError(path.string() + ": label '" + cells[c] + "' at line " + std::to_string(line_no) +
                                     ", column " + std::to_string(c + 1) + " is not an integer");
                labels.push_back(l);
            } else {
                double v = 0.0;
                if (!parse_double(cells[c], v))
                    throw ParseError(path.string() + ": non-numeric cell '" + cells[c] + "' at line " +
                                     std::to_string(line_no) + ", column " + std::to_string(c + 1));
                values.push_back(v);
            }
        }
    }
    if (labels.empty()) throw ParseError(path.string() + ": empty file");

    Matrix samples(labels.size(), width - 1);
    std::copy(values.begin(), values.end(), samples.data().begin());
    return SpectralDataset(std::move(samples), std::move(labels), path.string());
}

HsiCube make_cube(const npy::Array& data, const npy::Array& ground_truth) {
    if (data.shape.size() != 3) throw DimensionError("cube data must be 3-dimensional (H, W, B)");
    if (ground_truth.shape.size() != 2) throw DimensionError("ground truth must be 2-dimensional (H, W)");
    if (ground_truth.shape[0] != data.shape[0] || ground_truth.shape[1] != data.shape[1])
        throw DimensionError("ground truth shape does not match the cube's spatial dimensions");
    const auto ints = ground_truth.to_integers();
    std::vector<int> gt(ints.begin(), ints.end());
    return HsiCube(data.shape[0], data.shape[1], data.shape[2], data.to_doubles(), std::move(gt));
}

HsiCube load_cube(const std::filesystem::path& data_path, const std::filesystem::path& gt_path) {
    return make_cube(npy::load(data_path), npy::load(gt_path));
}

SpectralDataset flatten_cube(const HsiCube& cube, const std::set<int>& keep_classes, std::string source) {
    if (keep_classes.empty()) throw InvalidArgument("flatten_cube: keep_classes is empty");
    std::vector<std::pair<std::size_t, std::size_t>> pixels;
    for (std::size_t r = 0; r < cube.height(); ++r)
        for (std::size_t c = 0; c < cube.width(); ++c) {
            const int l = cube.label(r, c);
            if (l != 0 && keep_classes.count(l)) pixels.emplace_back(r, c);
        }
    if (pixels.empty()) throw InvalidArgument("no samples for requested classes");

    Matrix samples(pixels.size(), cube.bands());
    std::vector<int> labels(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const auto [r, c] = pixels[i];
        for (std::size_t b = 0; b < cube.bands(); ++b) samples(i, b) = cube.at(r, c, b);
        labels[i] = cube.label(r, c);
    }
    return SpectralDataset(std::move(samples), std::move(labels), std::move(source));
}

SpectralDataset select_pair(const SpectralDataset& ds, const ClassPairTask& task) {
    std::vector<std::size_t> idx;
    std::vector<int> labels;
    bool seen_a = false, seen_b = false;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const int l = ds.labels()[i];
        if (l == task.class_a()) {
            idx.push_back(i);
            labels.push_back(0);
            seen_a = true;
        } else if (l == task.class_b()) {
            idx.push_back(i);
            labels.push_back(1);
            seen_b = true;
        }
    }
    if (!seen_a || !seen_b)
        throw InvalidArgument("class " + std::to_string(seen_a ? task.class_b() : task.class_a()) +
                              " is missing from the dataset");
    return SpectralDataset(ds.samples().select_rows(idx), std::move(labels), ds.source() + " [" + task.name() + "]");
}

void save_dataset_npy(const std::filesystem::path& prefix, const SpectralDataset& ds) {
    const auto& x = ds.samples();
    npy::save(prefix.string() + ".samples.npy", npy::Array::from_doubles({x.rows(), x.cols()}, x.data()));
    std::vector<std::int64_t> labels(ds.labels().begin(), ds.labels().end());
    npy::save(prefix.string() + ".labels.npy", npy::Array::from_integers(npy::DType::i16, {labels.size()}, labels));
}

SpectralDataset load_dataset_npy(const std::filesystem::path& prefix) {
    const auto base = strip_suffix(strip_suffix(prefix, ".npy"), ".samples");
    const auto xs = npy::load(base.string() + ".samples.npy");
    const auto ys = npy::load(base.string() + ".labels.npy");
    if (xs.shape.size() != 2) throw DimensionError("samples array must be 2-dimensional");
    if (ys.shape.size() != 1) throw DimensionError("labels array must be 1-dimensional");
    Matrix samples(xs.shape[0], xs.shape[1]);
    const auto v = xs.to_doubles();
    std::copy(v.begin(), v.end(), samples.data().begin());
    const auto ints = ys.to_integers();
    return SpectralDataset(std::move(samples), std::vector<int>(ints.begin(), ints.end()), base.string());
}

void save_dataset_csv(const std::filesystem::path& path, const SpectralDataset& ds) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    char buf[32];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.samples().row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        out << ds.labels()[i] << '\n';
    }
}

SpectralDataset load_dataset(const std::filesystem::path& path) {
    if (path.extension() == ".csv") {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open '" + path.string() + "'");
        std::string first;
        std::getline(in, first);
        const auto cells = split_commas(first);
        double probe = 0.0;
        const bool header = !cells.empty() && !parse_double(cells.front(), probe);
        return load_csv(path, header);
    }
    return load_dataset_npy(path);
}

}  // namespace qcov
