#pragma once

#include <atomic>
#include <filesystem>
#include <string>

namespace testutil {

// Self-cleaning unique temp directory under the system temp root.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<int> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path = base / ("aptlabel_test_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline std::filesystem::path fixtures_dir() { return FIXTURES_DIR; }
inline std::filesystem::path data_dir() { return DATA_DIR; }
inline std::filesystem::path golden_dir() { return GOLDEN_DIR; }

} // namespace testutil
