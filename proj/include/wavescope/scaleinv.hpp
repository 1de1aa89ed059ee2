#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavescope/ingest.hpp"
#include "wavescope/wavelet.hpp"

namespace wavescope {

struct ScaleSensitivity {
  double alpha = 1.0;
  double sensitivity = 0.0;  // 1 - cosine similarity, in [0, 2]
  bool zero_norm = false;    // a coefficient vector fell below the division floor
};

struct WindowEntropyProfile {
  std::vector<std::size_t> window_sizes;
  std::vector<double> mean_entropy;  // normalized by log(w), in [0, 1]
};

/// Indices round(i (n-1) / (m-1)), i < m = floor(alpha n), deduplicated in order.
std::vector<std::size_t> subsample_indices(std::size_t n, double alpha);

Series subsample(const Series& series, double alpha);

/// Linear interpolation of `values` onto `count` evenly spaced points spanning the same range.
std::vector<double> resample_linear(std::span<const double> values, std::size_t count);

/// Concatenated per-scale coefficient vectors of `a` and `b`, the shorter scale
/// of each pair linearly resampled to the longer one's length.
std::pair<std::vector<double>, std::vector<double>> aligned_coefficients(const WaveletDecomposition& a,
                                                                         const WaveletDecomposition& b);

double cosine_similarity(std::span<const double> a, std::span<const double> b, bool* zero_norm = nullptr);

ScaleSensitivity scale_sensitivity(const Series& series, double alpha, const FilterBank& bank,
                                   BoundaryMode boundary = BoundaryMode::Periodic);

WindowEntropyProfile window_entropy(const Series& series, std::span<const std::size_t> window_sizes);

}  // namespace wavescope
