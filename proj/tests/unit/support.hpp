#pragma once

#include <filesystem>
#include <string>

#include "doctest.h"

namespace tabula::test {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(TABULA_DATA_DIR) / name; }

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("tabula-" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace tabula::test

#define CHECK_ERROR_CODE(expr, expected)                 \
  do {                                                   \
    bool thrown_ = false;                                \
    try {                                                \
      (void)(expr);                                      \
    } catch (const ::tabula::Error& e_) {                \
      thrown_ = true;                                    \
      CHECK(e_.code() == (expected));                    \
    }                                                    \
    CHECK_MESSAGE(thrown_, "expected " #expected);       \
  } while (false)
