#pragma once

#include <filesystem>
#include <string>

namespace pqbench::test {

inline std::filesystem::path data_path(const std::string& relative) {
  return std::filesystem::path(PQBENCH_TEST_DATA_DIR) / relative;
}

}  // namespace pqbench::test
