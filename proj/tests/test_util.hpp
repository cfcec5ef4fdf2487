#pragma once

#include <filesystem>
#include <string>

namespace heatseek::test {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "heatseek_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path data_dir() { return HEATSEEK_TEST_DATA; }

}  // namespace heatseek::test
