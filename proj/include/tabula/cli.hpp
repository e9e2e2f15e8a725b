#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tabula::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

/// Runs one command. `args` excludes the program name. Human-readable
/// diagnostics go to `err`; `out` receives exactly one JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `dir/model.json` -> `dir/model.manifest.json`.
std::filesystem::path manifest_path(const std::filesystem::path& primary_output);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace tabula::cli
