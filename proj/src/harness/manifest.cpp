#include "camo/harness/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace camo::harness {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 init failed");

  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    if (got > 0 &&
        EVP_DigestUpdate(ctx.get(), buf, static_cast<size_t>(got)) != 1)
      throw std::runtime_error("sha256 update failed");
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256 final failed");

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string write_manifest(const std::string& output_dir,
                           const std::vector<std::string>& artifact_paths) {
  namespace fs = std::filesystem;
  const fs::path base(output_dir);

  std::vector<std::pair<std::string, std::string>> rows;  // rel path, hash
  rows.reserve(artifact_paths.size());
  for (const std::string& p : artifact_paths)
    rows.emplace_back(fs::relative(p, base).generic_string(), sha256_file(p));
  std::sort(rows.begin(), rows.end());

  const std::string manifest_path = (base / "manifest").string();
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("cannot write " + manifest_path);
  for (const auto& [rel, hash] : rows) out << hash << "  " << rel << '\n';
  if (!out) throw std::runtime_error("manifest write failed");
  return manifest_path;
}

}  // namespace camo::harness
