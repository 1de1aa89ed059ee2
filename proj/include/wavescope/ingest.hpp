#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wavescope/npy.hpp"

namespace wavescope {

// Which 1-D slice of an n x n attention matrix becomes the analyzed series.
struct RowMode {
  enum class Kind { RowsMean, LastRow, RowIndex };
  Kind kind = Kind::RowsMean;
  std::size_t index = 0;  // only for RowIndex

  static RowMode rows_mean() { return {}; }
  static RowMode last_row() { return {Kind::LastRow, 0}; }
  static RowMode row_index(std::size_t k) { return {Kind::RowIndex, k}; }

  friend bool operator==(const RowMode&, const RowMode&) = default;
};

/// "rows-mean", "last-row", or "row-index:K".
std::string to_string(const RowMode& mode);
RowMode parse_row_mode(const std::string& text);

struct Manifest {
  std::string model_name;
  std::size_t num_layers = 0;
  std::size_t num_heads = 0;
  std::size_t seq_len = 0;
  Dtype dtype = Dtype::f64;
  RowMode row_mode;
  std::string source;
  std::string sequence_id;
};

Manifest parse_manifest(const std::string& json_text);
Manifest read_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const Manifest& manifest);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// Checks the manifest's own invariants and its agreement with a tensor shape.
void check_manifest(const Manifest& manifest, const std::array<std::size_t, 4>& shape);

// Rows whose sums stray further than this from 1 are rejected; closer ones are renormalized.
inline constexpr double kRowSumTolerance = 1e-4;

struct Violation {
  enum class Kind { NonFinite, Negative, RowSum };
  Kind kind;
  std::size_t layer, head, row;
  double value;  // offending element, or the row sum
  std::string describe() const;
};

/// Every element-level and row-level violation in the tensor, in storage order.
std::vector<Violation> find_violations(const Tensor4& weights);

class AttentionDump {
 public:
  AttentionDump(Manifest manifest, Tensor4 weights, std::size_t renormalized_rows);

  const Manifest& manifest() const noexcept { return manifest_; }
  const Tensor4& weights() const noexcept { return weights_; }
  std::size_t renormalized_rows() const noexcept { return renormalized_rows_; }
  std::size_t num_layers() const noexcept { return weights_.shape[0]; }
  std::size_t num_heads() const noexcept { return weights_.shape[1]; }
  std::size_t seq_len() const noexcept { return weights_.shape[2]; }

  /// Row-major n x n attention matrix for one head.
  std::span<const double> matrix(std::size_t layer, std::size_t head) const;

 private:
  Manifest manifest_;
  Tensor4 weights_;
  std::size_t renormalized_rows_;
};

/// Validates and renormalizes an in-memory tensor against its manifest.
AttentionDump make_dump(Manifest manifest, Tensor4 weights);
AttentionDump load_dump(const std::filesystem::path& tensor_path, const std::filesystem::path& manifest_path);

// Minimum series length: one db2 decomposition level needs 8 samples.
inline constexpr std::size_t kMinSeriesLength = 8;

struct Series {
  std::vector<double> values;
  bool normalized = false;

  std::size_t size() const noexcept { return values.size(); }
};

/// Rescales to unit sum; a zero-sum input stays zero and unnormalized.
Series normalized_series(std::vector<double> values);

Series extract_series(const AttentionDump& dump, std::size_t layer, std::size_t head, const RowMode& mode);

}  // namespace wavescope
