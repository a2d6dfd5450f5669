#ifndef QCOV_TESTS_SUPPORT_HPP
#define QCOV_TESTS_SUPPORT_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

namespace support {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("qcov_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& s) {
    std::ofstream(p, std::ios::binary) << s;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Directory holding indian_pines_cube.npy and indian_pines_gt.npy.
inline std::filesystem::path data_dir() {
    if (const char* env = std::getenv("QCOV_DATA_DIR")) return env;
    return QCOV_DEFAULT_DATA_DIR;
}

inline bool have_indian_pines() {
    return std::filesystem::is_regular_file(data_dir() / "indian_pines_cube.npy") &&
           std::filesystem::is_regular_file(data_dir() / "indian_pines_gt.npy");
}

}  // namespace support

#endif
