#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "wavescope/ingest.hpp"

namespace support {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("wavescope_" + tag + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline wavescope::Tensor4 uniform_tensor(std::size_t layers, std::size_t heads, std::size_t n) {
  wavescope::Tensor4 t;
  t.shape = {layers, heads, n, n};
  t.data.assign(t.size(), 1.0 / static_cast<double>(n));
  return t;
}

inline wavescope::Manifest manifest_for(const wavescope::Tensor4& t, wavescope::Dtype dtype = wavescope::Dtype::f64) {
  wavescope::Manifest m;
  m.model_name = "fixture";
  m.num_layers = t.shape[0];
  m.num_heads = t.shape[1];
  m.seq_len = t.shape[2];
  m.dtype = dtype;
  m.source = "fixture";
  m.sequence_id = "seq-0";
  return m;
}

}  // namespace support
