#include <cmath>
#include <numeric>
#include <sstream>

#include "wavescope/error.hpp"
#include "wavescope/ingest.hpp"

namespace wavescope {

std::string Violation::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "layer " << layer << " head " << head << " row " << row << ": ";
  switch (kind) {
    case Kind::NonFinite: os << "NonFiniteWeight (" << value << ")"; break;
    case Kind::Negative: os << "NegativeWeight (" << value << ")"; break;
    case Kind::RowSum: os << "RowSumViolation (sum " << value << ")"; break;
  }
  return os.str();
}

std::vector<Violation> find_violations(const Tensor4& w) {
  std::vector<Violation> out;
  for (std::size_t l = 0; l < w.shape[0]; ++l) {
    for (std::size_t h = 0; h < w.shape[1]; ++h) {
      for (std::size_t q = 0; q < w.shape[2]; ++q) {
        const auto row = w.row(l, h, q);
        bool finite = true;
        for (double v : row) {
          if (!std::isfinite(v)) {
            out.push_back({Violation::Kind::NonFinite, l, h, q, v});
            finite = false;
            break;
          }
        }
        for (double v : row) {
          if (v < 0.0) {
            out.push_back({Violation::Kind::Negative, l, h, q, v});
            break;
          }
        }
        if (!finite) continue;
        const double sum = std::accumulate(row.begin(), row.end(), 0.0);
        if (std::abs(sum - 1.0) > kRowSumTolerance) out.push_back({Violation::Kind::RowSum, l, h, q, sum});
      }
    }
  }
  return out;
}

AttentionDump::AttentionDump(Manifest manifest, Tensor4 weights, std::size_t renormalized_rows)
    : manifest_(std::move(manifest)), weights_(std::move(weights)), renormalized_rows_(renormalized_rows) {}

std::span<const double> AttentionDump::matrix(std::size_t layer, std::size_t head) const {
  if (layer >= num_layers() || head >= num_heads()) {
    throw Error(Errc::IndexOutOfRange, "head (" + std::to_string(layer) + ", " + std::to_string(head) + ")");
  }
  const std::size_t n = seq_len();
  return {weights_.data.data() + weights_.offset(layer, head, 0, 0), n * n};
}

AttentionDump make_dump(Manifest manifest, Tensor4 weights) {
  check_manifest(manifest, weights.shape);
  const auto violations = find_violations(weights);
  if (!violations.empty()) {
    const auto& v = violations.front();
    const Errc code = v.kind == Violation::Kind::NonFinite ? Errc::NonFiniteWeight
                      : v.kind == Violation::Kind::Negative ? Errc::NegativeWeight
                                                            : Errc::RowSumViolation;
    throw Error(code, v.describe());
  }
  std::size_t renormalized = 0;
  const std::size_t n = weights.shape[3];
  for (std::size_t r = 0; r < weights.shape[0] * weights.shape[1] * weights.shape[2]; ++r) {
    double* row = weights.data.data() + r * n;
    const double sum = std::accumulate(row, row + n, 0.0);
    if (std::abs(sum - 1.0) > 1e-12) {
      for (std::size_t k = 0; k < n; ++k) row[k] /= sum;
      ++renormalized;
    }
  }
  return AttentionDump(std::move(manifest), std::move(weights), renormalized);
}

AttentionDump load_dump(const std::filesystem::path& tensor_path, const std::filesystem::path& manifest_path) {
  Tensor4 weights = read_npy(tensor_path);
  Manifest manifest = read_manifest(manifest_path);
  if (manifest.dtype != weights.source_dtype) {
    throw Error(Errc::ManifestMismatch, "manifest dtype " + to_string(manifest.dtype) + " but tensor stores " +
                                            to_string(weights.source_dtype));
  }
  return make_dump(std::move(manifest), std::move(weights));
}

Series normalized_series(std::vector<double> values) {
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  Series s{std::move(values), false};
  if (sum > 0.0) {
    for (double& v : s.values) v /= sum;
    s.normalized = true;
  }
  return s;
}

Series extract_series(const AttentionDump& dump, std::size_t layer, std::size_t head, const RowMode& mode) {
  const auto m = dump.matrix(layer, head);
  const std::size_t n = dump.seq_len();
  std::vector<double> values(n, 0.0);
  switch (mode.kind) {
    case RowMode::Kind::RowsMean:
      for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t k = 0; k < n; ++k) values[k] += m[q * n + k];
      }
      for (double& v : values) v /= static_cast<double>(n);
      break;
    case RowMode::Kind::LastRow:
      std::copy_n(m.begin() + static_cast<std::ptrdiff_t>((n - 1) * n), n, values.begin());
      break;
    case RowMode::Kind::RowIndex:
      if (mode.index >= n) {
        throw Error(Errc::IndexOutOfRange, "row " + std::to_string(mode.index) + " of " + std::to_string(n));
      }
      std::copy_n(m.begin() + static_cast<std::ptrdiff_t>(mode.index * n), n, values.begin());
      break;
  }
  return normalized_series(std::move(values));
}

}  // namespace wavescope
