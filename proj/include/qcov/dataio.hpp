#ifndef QCOV_DATAIO_HPP
#define QCOV_DATAIO_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qcov/matrix.hpp"
#include "qcov/npy.hpp"

namespace qcov {

/// Labeled sample matrix, one row per pixel/point. Construction validates
/// finiteness, label count and the minimum size of 2x2.
class SpectralDataset {
public:
    SpectralDataset(Matrix samples, std::vector<int> labels, std::string source);

    const Matrix& samples() const noexcept { return samples_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return samples_.rows(); }
    std::size_t band_count() const noexcept { return samples_.cols(); }
    const std::string& source() const noexcept { return source_; }

    /// Per-class sample counts, ordered by class id.
    std::map<int, std::size_t> class_counts() const;

private:
    Matrix samples_;
    std::vector<int> labels_;
    std::string source_;
};

/// Hyperspectral cube (H x W x B, band-interleaved-by-pixel) with its
/// ground-truth map. Label 0 marks unlabeled pixels.
class HsiCube {
public:
    HsiCube(std::size_t height, std::size_t width, std::size_t bands, std::vector<double> data,
            std::vector<int> ground_truth);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t bands() const noexcept { return bands_; }
    double at(std::size_t r, std::size_t c, std::size_t b) const noexcept {
        return data_[(r * width_ + c) * bands_ + b];
    }
    int label(std::size_t r, std::size_t c) const noexcept { return ground_truth_[r * width_ + c]; }

private:
    std::size_t height_, width_, bands_;
    std::vector<double> data_;
    std::vector<int> ground_truth_;
};

/// Ordered pair of distinct class ids; class_a becomes label 0, class_b label 1.
class ClassPairTask {
public:
    ClassPairTask(int class_a, int class_b);

    /// Parses "3/10".
    static ClassPairTask parse(const std::string& text);

    int class_a() const noexcept { return a_; }
    int class_b() const noexcept { return b_; }
    std::string name() const;

    friend bool operator==(const ClassPairTask&, const ClassPairTask&) = default;

private:
    int a_, b_;
};

npy::Array load_npy(const std::filesystem::path& path);
void write_npy(const std::filesystem::path& path, const npy::Array& array);

/// Column holding the class label in a CSV file; nullopt means the last one.
using LabelColumn = std::optional<std::size_t>;

SpectralDataset load_csv(const std::filesystem::path& path, bool has_header, LabelColumn label_column = std::nullopt);

/// Builds a cube from a 3-D reflectance array and a 2-D ground-truth array.
HsiCube make_cube(const npy::Array& data, const npy::Array& ground_truth);
HsiCube load_cube(const std::filesystem::path& data_path, const std::filesystem::path& gt_path);

/// Pixels whose label is in keep_classes, in raster order. Label 0 is never kept.
SpectralDataset flatten_cube(const HsiCube& cube, const std::set<int>& keep_classes, std::string source = "cube");

/// Binary subset for a task with labels relabeled to {0, 1}; order preserved.
SpectralDataset select_pair(const SpectralDataset& ds, const ClassPairTask& task);

/// Flat dataset stored as `<prefix>.samples.npy` + `<prefix>.labels.npy`.
void save_dataset_npy(const std::filesystem::path& prefix, const SpectralDataset& ds);
SpectralDataset load_dataset_npy(const std::filesystem::path& prefix);

/// Writes the dataset as CSV with the label in the last column.
void save_dataset_csv(const std::filesystem::path& path, const SpectralDataset& ds);

/// Loads a flat dataset file: CSV (label last, header auto-detected) or an NPY
/// prefix / samples file.
SpectralDataset load_dataset(const std::filesystem::path& path);

}  // namespace qcov

#endif  // QCOV_DATAIO_HPP
