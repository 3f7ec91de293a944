#pragma once

#include <string>
#include <vector>

namespace camo::harness {

// SHA-256 of a file's contents, lowercase hex.
std::string sha256_file(const std::string& path);

// Writes `<sha256>  <path relative to output_dir>` lines, one per artifact,
// sorted by path. Returns the manifest path.
std::string write_manifest(const std::string& output_dir,
                           const std::vector<std::string>& artifact_paths);

}  // namespace camo::harness
