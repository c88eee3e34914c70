#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "dnl/label_io.hpp"
#include "dnl/store.hpp"

namespace dnl::testing {

inline std::filesystem::path fixture_path(const std::string& name) { return std::filesystem::path(DNL_FIXTURES) / name; }
inline std::filesystem::path testdata_path(const std::string& name) { return std::filesystem::path(DNL_TESTDATA) / name; }

inline std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }
inline Label fixture_label(const std::string& name) { return parse_label(read_fixture(name)); }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("dnl-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(std::rand()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace dnl::testing
