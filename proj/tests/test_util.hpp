// SPDX-License-Identifier: Apache-2.0
// Shared helpers for the test suites: scratch directories and file diffing.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace rfscene::test {

// Self-deleting scratch directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / (tag + "-" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("TempDir: could not create scratch directory");
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::vector<char> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<char>((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
}

// Relative paths of all regular files under root, sorted.
inline std::vector<std::string> list_files(const std::filesystem::path& root) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out.push_back(std::filesystem::relative(e.path(), root).generic_string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// True when both trees hold the same files with identical bytes. On mismatch
// `why` names the first offending path.
inline bool trees_identical(const std::filesystem::path& a, const std::filesystem::path& b,
                            std::string& why) {
  auto fa = list_files(a);
  auto fb = list_files(b);
  if (fa != fb) {
    why = "file lists differ";
    return false;
  }
  for (const auto& rel : fa) {
    if (slurp(a / rel) != slurp(b / rel)) {
      why = rel;
      return false;
    }
  }
  return true;
}

}  // namespace rfscene::test
