#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <ostream>
#include <string>

namespace skewstream::cli {

/// Whole file as text; throws std::runtime_error naming the path.
std::string read_file(const std::filesystem::path& path);

/// Input stream for a path, "-" for stdin; ".gz" files are decompressed on the fly.
std::unique_ptr<std::istream> open_input(const std::string& path);

/// Writes to `path` via a sibling temp file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace skewstream::cli
