#ifndef QCOV_NPY_HPP
#define QCOV_NPY_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcov::npy {

/// Element types understood by the reader. All multi-byte types are
/// little-endian.
enum class DType { f64, f32, u8, i8, u16, i16 };

std::string_view descr(DType t) noexcept;
std::size_t item_size(DType t) noexcept;
bool is_floating(DType t) noexcept;

/// An array read from (or destined for) an NPY v1.0 file. The payload is kept
/// as raw little-endian bytes so that a load/save cycle is lossless.
struct Array {
    DType dtype = DType::f64;
    std::vector<std::size_t> shape;
    std::vector<std::byte> payload;

    std::size_t size() const noexcept;

    /// Element values widened to double. Exact for every supported dtype.
    std::vector<double> to_doubles() const;
    /// Element values as integers; fails on floating dtypes.
    std::vector<std::int64_t> to_integers() const;

    static Array from_doubles(std::vector<std::size_t> shape, std::span<const double> values);
    static Array from_integers(DType t, std::vector<std::size_t> shape, std::span<const std::int64_t> values);
};

/// Serialized file image (magic, header, payload).
std::vector<std::byte> encode(const Array& a);
Array decode(std::span<const std::byte> bytes);

Array load(const std::filesystem::path& path);
void save(const std::filesystem::path& path, const Array& a);

}  // namespace qcov::npy

#endif  // QCOV_NPY_HPP
