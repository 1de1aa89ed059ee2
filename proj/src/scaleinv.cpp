#include "wavescope/scaleinv.hpp"

#include <algorithm>
#include <cmath>

#include "wavescope/error.hpp"
#include "wavescope/spectral.hpp"

namespace wavescope {

std::vector<std::size_t> subsample_indices(std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::InvalidConfig, "alpha must lie in (0, 1]");
  const auto m = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 1e-9));
  if (m < kMinSeriesLength) {
    throw Error(Errc::TooShortAfterScaling, "floor(" + std::to_string(alpha) + " * " + std::to_string(n) +
                                                ") = " + std::to_string(m) + " < " + std::to_string(kMinSeriesLength));
  }
  std::vector<std::size_t> idx;
  idx.reserve(m);
  const double step = static_cast<double>(n - 1) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = static_cast<std::size_t>(std::llround(static_cast<double>(i) * step));
    if (idx.empty() || idx.back() != j) idx.push_back(j);
  }
  return idx;
}

Series subsample(const Series& series, double alpha) {
  const auto idx = subsample_indices(series.size(), alpha);
  std::vector<double> values;
  values.reserve(idx.size());
  for (std::size_t i : idx) values.push_back(series.values[i]);
  if (idx.size() == series.size()) return series;
  return normalized_series(std::move(values));
}

std::vector<double> resample_linear(std::span<const double> values, std::size_t count) {
  std::vector<double> out(count, 0.0);
  if (values.empty() || count == 0) return out;
  if (values.size() == count) return {values.begin(), values.end()};
  if (values.size() == 1 || count == 1) {
    std::fill(out.begin(), out.end(), values.front());
    return out;
  }
  const double scale = static_cast<double>(values.size() - 1) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double pos = static_cast<double>(i) * scale;
    const auto lo = std::min(static_cast<std::size_t>(pos), values.size() - 2);
    const double frac = pos - static_cast<double>(lo);
    out[i] = values[lo] * (1.0 - frac) + values[lo + 1] * frac;
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> aligned_coefficients(const WaveletDecomposition& a,
                                                                         const WaveletDecomposition& b) {
  if (a.levels != b.levels) throw Error(Errc::DimensionMismatch, "decompositions differ in level count");
  std::vector<double> va, vb;
  for (std::size_t s = 0; s <= a.levels; ++s) {
    const auto ca = a.scale(s);
    const auto cb = b.scale(s);
    const std::size_t len = std::max(ca.size(), cb.size());
    const auto ra = resample_linear(ca, len);
    const auto rb = resample_linear(cb, len);
    va.insert(va.end(), ra.begin(), ra.end());
    vb.insert(vb.end(), rb.begin(), rb.end());
  }
  return {std::move(va), std::move(vb)};
}

double cosine_similarity(std::span<const double> a, std::span<const double> b, bool* zero_norm) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "cosine of vectors of different length");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double floor2 = kDivisionFloor * kDivisionFloor;
  const bool degenerate = na < floor2 || nb < floor2;
  if (zero_norm) *zero_norm = degenerate;
  const double denom = std::sqrt(std::max(na, floor2) * std::max(nb, floor2));
  return dot / denom;
}

ScaleSensitivity scale_sensitivity(const Series& series, double alpha, const FilterBank& bank,
                                   BoundaryMode boundary) {
  const Series scaled = subsample(series, alpha);
  const std::size_t levels = max_level(scaled.size(), bank.length());
  if (levels < 1 || scaled.size() < bank.length()) {
    throw Error(Errc::TooShortAfterScaling, "subsampled length " + std::to_string(scaled.size()) + " admits no " +
                                                bank.name + " level");
  }
  const auto wx = dwt(series.values, bank, levels, boundary);
  const auto wa = dwt(scaled.values, bank, levels, boundary);
  const auto [va, vb] = aligned_coefficients(wx, wa);
  ScaleSensitivity out;
  out.alpha = alpha;
  const double cos = cosine_similarity(va, vb, &out.zero_norm);
  out.sensitivity = std::clamp(1.0 - cos, 0.0, 2.0);
  return out;
}

WindowEntropyProfile window_entropy(const Series& series, std::span<const std::size_t> window_sizes) {
  const std::size_t n = series.size();
  WindowEntropyProfile out;
  for (std::size_t w : window_sizes) {
    if (w < 2) throw Error(Errc::InvalidConfig, "window size must be at least 2");
    if (w > n) {
      throw Error(Errc::WindowTooLarge, "window " + std::to_string(w) + " exceeds series length " + std::to_string(n));
    }
    const std::size_t stride = w / 2;
    const double log_w = std::log(static_cast<double>(w));
    double sum = 0.0;
    std::size_t windows = 0;
    for (std::size_t start = 0; start + w <= n; start += stride) {
      double mass = 0.0;
      for (std::size_t i = start; i < start + w; ++i) mass += series.values[i];
      if (mass < kDivisionFloor) continue;
      double h = 0.0;
      for (std::size_t i = start; i < start + w; ++i) {
        const double p = series.values[i] / mass;
        if (p > 0.0) h -= p * std::log(std::max(p, kDivisionFloor));
      }
      sum += std::clamp(h / log_w, 0.0, 1.0);
      ++windows;
    }
    out.window_sizes.push_back(w);
    out.mean_entropy.push_back(windows ? sum / static_cast<double>(windows) : 0.0);
  }
  return out;
}

}  // namespace wavescope
