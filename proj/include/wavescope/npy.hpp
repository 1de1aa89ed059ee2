#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wavescope {

enum class Dtype { f32, f64 };

std::string to_string(Dtype dtype);
Dtype parse_dtype(const std::string& text);

// Dense row-major [layer, head, query, key] tensor. Values are always held as
// doubles; f4 payloads are widened exactly on read.
struct Tensor4 {
  std::array<std::size_t, 4> shape{};
  std::vector<double> data;
  Dtype source_dtype = Dtype::f64;

  std::size_t size() const noexcept { return shape[0] * shape[1] * shape[2] * shape[3]; }

  std::size_t offset(std::size_t l, std::size_t h, std::size_t q, std::size_t k) const noexcept {
    return ((l * shape[1] + h) * shape[2] + q) * shape[3] + k;
  }
  double at(std::size_t l, std::size_t h, std::size_t q, std::size_t k) const noexcept {
    return data[offset(l, h, q, k)];
  }
  double& at(std::size_t l, std::size_t h, std::size_t q, std::size_t k) noexcept {
    return data[offset(l, h, q, k)];
  }
  std::span<const double> row(std::size_t l, std::size_t h, std::size_t q) const noexcept {
    return {data.data() + offset(l, h, q, 0), shape[3]};
  }
};

// NPY v1.0 header fields.
struct NpyHeader {
  Dtype dtype = Dtype::f64;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
};

/// Parses the python-literal header dict of an NPY v1.0 file.
NpyHeader parse_npy_header(const std::string& dict);

/// Reads a 4-D little-endian f4/f8 C-order NPY v1.0 file.
Tensor4 read_npy(const std::filesystem::path& path);
Tensor4 read_npy_bytes(std::span<const unsigned char> bytes);

/// Writes `tensor` in `dtype` (f64 -> f32 narrowing rounds to nearest).
void write_npy(const std::filesystem::path& path, const Tensor4& tensor, Dtype dtype);
std::vector<unsigned char> write_npy_bytes(const Tensor4& tensor, Dtype dtype);

}  // namespace wavescope
