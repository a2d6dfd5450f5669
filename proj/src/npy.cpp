#include "qcov/npy.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>

#include "qcov/error.hpp"

static_assert(std::endian::native == std::endian::little, "NPY payloads are read by memcpy on little-endian hosts");

namespace qcov::npy {

namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;
constexpr std::size_t kPreludeLen = kMagicLen + 2 + 2;  // magic, version, header length
constexpr std::size_t kAlign = 64;

template <typename T>
void widen(std::span<const std::byte> raw, std::size_t n, auto&& sink) {
    for (std::size_t i = 0; i < n; ++i) {
        T v;
        std::memcpy(&v, raw.data() + i * sizeof(T), sizeof(T));
        sink(i, v);
    }
}

template <typename T>
void narrow(std::span<const std::int64_t> values, std::vector<std::byte>& out) {
    out.resize(values.size() * sizeof(T));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < static_cast<std::int64_t>(std::numeric_limits<T>::min()) ||
            values[i] > static_cast<std::int64_t>(std::numeric_limits<T>::max()))
            throw InvalidArgument("npy: value " + std::to_string(values[i]) + " does not fit the target dtype");
        const T v = static_cast<T>(values[i]);
        std::memcpy(out.data() + i * sizeof(T), &v, sizeof(T));
    }
}

std::optional<DType> parse_descr(std::string_view s) {
    if (s == "<f8") return DType::f64;
    if (s == "<f4") return DType::f32;
    if (s == "|u1" || s == "<u1") return DType::u8;
    if (s == "|i1" || s == "<i1") return DType::i8;
    if (s == "<u2") return DType::u16;
    if (s == "<i2") return DType::i16;
    return std::nullopt;
}

// Minimal reader for the Python-literal dict written by numpy.save.
class HeaderParser {
public:
    explicit HeaderParser(std::string_view text) : s_(text) {}

    void parse(std::string& descr, bool& fortran, std::vector<std::size_t>& shape) {
        bool have_descr = false, have_order = false, have_shape = false;
        expect('{');
        while (true) {
            skip_ws();
            if (peek() == '}') break;
            const std::string key = quoted();
            expect(':');
            if (key == "descr") {
                descr = quoted();
                have_descr = true;
            } else if (key == "fortran_order") {
                fortran = boolean();
                have_order = true;
            } else if (key == "shape") {
                shape = tuple();
                have_shape = true;
            } else {
                throw ParseError("npy: unexpected header key '" + key + "'");
            }
            skip_ws();
            if (peek() == ',') ++pos_;
        }
        if (!have_descr || !have_order || !have_shape)
            throw ParseError("npy: header lacks one of 'descr', 'fortran_order', 'shape'");
    }

private:
    char peek() {
        if (pos_ >= s_.size()) throw ParseError("npy: truncated header dictionary");
        return s_[pos_];
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    void expect(char c) {
        skip_ws();
        if (peek() != c) throw ParseError(std::string("npy: expected '") + c + "' in header");
        ++pos_;
    }
    std::string quoted() {
        skip_ws();
        const char q = peek();
        if (q != '\'' && q != '"') throw ParseError("npy: expected quoted string in header");
        const auto end = s_.find(q, pos_ + 1);
        if (end == std::string_view::npos) throw ParseError("npy: unterminated string in header");
        std::string out(s_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
        return out;
    }
    bool boolean() {
        skip_ws();
        if (s_.substr(pos_, 4) == "True") { pos_ += 4; return true; }
        if (s_.substr(pos_, 5) == "False") { pos_ += 5; return false; }
        throw ParseError("npy: fortran_order must be True or False");
    }
    std::vector<std::size_t> tuple() {
        expect('(');
        std::vector<std::size_t> dims;
        while (true) {
            skip_ws();
            if (peek() == ')') { ++pos_; break; }
            if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("npy: malformed shape tuple");
            std::size_t v = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                v = v * 10 + static_cast<std::size_t>(s_[pos_++] - '0');
            dims.push_back(v);
            skip_ws();
            if (peek() == ',') ++pos_;
        }
        return dims;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string shape_literal(const std::vector<std::size_t>& shape) {
    std::string out = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(shape[i]);
    }
    if (shape.size() == 1) out += ",";
    out += ")";
    return out;
}

}  // namespace

std::string_view descr(DType t) noexcept {
    switch (t) {
        case DType::f64: return "<f8";
        case DType::f32: return "<f4";
        case DType::u8: return "|u1";
        case DType::i8: return "|i1";
        case DType::u16: return "<u2";
        case DType::i16: return "<i2";
    }
    return "";
}

std::size_t item_size(DType t) noexcept {
    switch (t) {
        case DType::f64: return 8;
        case DType::f32: return 4;
        case DType::u8:
        case DType::i8: return 1;
        case DType::u16:
        case DType::i16: return 2;
    }
    return 0;
}

bool is_floating(DType t) noexcept { return t == DType::f64 || t == DType::f32; }

std::size_t Array::size() const noexcept {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
}

std::vector<double> Array::to_doubles() const {
    const std::size_t n = size();
    std::vector<double> out(n);
    auto put = [&](std::size_t i, auto v) { out[i] = static_cast<double>(v); };
    switch (dtype) {
        case DType::f64: widen<double>(payload, n, put); break;
        case DType::f32: widen<float>(payload, n, put); break;
        case DType::u8: widen<std::uint8_t>(payload, n, put); break;
        case DType::i8: widen<std::int8_t>(payload, n, put); break;
        case DType::u16: widen<std::uint16_t>(payload, n, put); break;
        case DType::i16: widen<std::int16_t>(payload, n, put); break;
    }
    return out;
}

std::vector<std::int64_t> Array::to_integers() const {
    if (is_floating(dtype)) throw InvalidArgument("npy: integer view requested for floating array");
    const std::size_t n = size();
    std::vector<std::int64_t> out(n);
    auto put = [&](std::size_t i, auto v) { out[i] = static_cast<std::int64_t>(v); };
    switch (dtype) {
        case DType::u8: widen<std::uint8_t>(payload, n, put); break;
        case DType::i8: widen<std::int8_t>(payload, n, put); break;
        case DType::u16: widen<std::uint16_t>(payload, n, put); break;
        case DType::i16: widen<std::int16_t>(payload, n, put); break;
        default: break;
    }
    return out;
}

Array Array::from_doubles(std::vector<std::size_t> shape, std::span<const double> values) {
    Array a;
    a.dtype = DType::f64;
    a.shape = std::move(shape);
    if (a.size() != values.size()) throw DimensionError("npy: shape does not match value count");
    a.payload.resize(values.size() * sizeof(double));
    if (!values.empty()) std::memcpy(a.payload.data(), values.data(), a.payload.size());
    return a;
}

Array Array::from_integers(DType t, std::vector<std::size_t> shape, std::span<const std::int64_t> values) {
    Array a;
    a.dtype = t;
    a.shape = std::move(shape);
    if (a.size() != values.size()) throw DimensionError("npy: shape does not match value count");
    switch (t) {
        case DType::u8: narrow<std::uint8_t>(values, a.payload); break;
        case DType::i8: narrow<std::int8_t>(values, a.payload); break;
        case DType::u16: narrow<std::uint16_t>(values, a.payload); break;
        case DType::i16: narrow<std::int16_t>(values, a.payload); break;
        default: throw InvalidArgument("npy: from_integers needs an integer dtype");
    }
    return a;
}

std::vector<std::byte> encode(const Array& a) {
    if (a.payload.size() != a.size() * item_size(a.dtype))
        throw DimensionError("npy: payload size disagrees with shape and dtype");
    std::string header = "{'descr': '" + std::string(descr(a.dtype)) +
                         "', 'fortran_order': False, 'shape': " + shape_literal(a.shape) + ", }";
    // Pad with spaces and a final newline so the data starts on a 64-byte boundary.
    const std::size_t unpadded = kPreludeLen + header.size() + 1;
    header.append((kAlign - unpadded % kAlign) % kAlign, ' ');
    header.push_back('\n');
    if (header.size() > 0xFFFF) throw InvalidArgument("npy: header too long for format version 1.0");

    std::vector<std::byte> out;
    out.reserve(kPreludeLen + header.size() + a.payload.size());
    for (std::size_t i = 0; i < kMagicLen; ++i) out.push_back(static_cast<std::byte>(kMagic[i]));
    out.push_back(std::byte{1});
    out.push_back(std::byte{0});
    out.push_back(static_cast<std::byte>(header.size() & 0xFF));
    out.push_back(static_cast<std::byte>(header.size() >> 8));
    for (char c : header) out.push_back(static_cast<std::byte>(c));
    out.insert(out.end(), a.payload.begin(), a.payload.end());
    return out;
}

Array decode(std::span<const std::byte> bytes) {
    if (bytes.size() < kPreludeLen || std::memcmp(bytes.data(), kMagic, kMagicLen) != 0)
        throw ParseError("npy: bad magic string");
    const auto major = std::to_integer<unsigned>(bytes[6]);
    const auto minor = std::to_integer<unsigned>(bytes[7]);
    if (major != 1 || minor != 0)
        throw ParseError("npy: unsupported format version " + std::to_string(major) + "." + std::to_string(minor));
    const std::size_t header_len = std::to_integer<std::size_t>(bytes[8]) | (std::to_integer<std::size_t>(bytes[9]) << 8);
    if (bytes.size() < kPreludeLen + header_len) throw ParseError("npy: truncated header");

    std::string_view header(reinterpret_cast<const char*>(bytes.data() + kPreludeLen), header_len);
    std::string descr_text;
    bool fortran = false;
    Array a;
    HeaderParser(header).parse(descr_text, fortran, a.shape);
    if (fortran) throw ParseError("npy: fortran_order arrays are not supported");
    const auto dt = parse_descr(descr_text);
    if (!dt) throw ParseError("npy: unsupported dtype '" + descr_text + "'");
    a.dtype = *dt;

    const std::size_t expected = a.size() * item_size(a.dtype);
    const std::size_t available = bytes.size() - kPreludeLen - header_len;
    if (available < expected)
        throw ParseError("npy: truncated payload, expected " + std::to_string(expected) + " bytes but found " +
                         std::to_string(available));
    const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(kPreludeLen + header_len);
    a.payload.assign(first, first + static_cast<std::ptrdiff_t>(expected));
    return a;
}

Array load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode(std::as_bytes(std::span(raw)));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save(const std::filesystem::path& path, const Array& a) {
    const auto bytes = encode(a);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace qcov::npy
