#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wavescope/error.hpp"
#include "wavescope/spectral.hpp"

namespace wavescope {

std::string to_string(Window w) { return w == Window::Hann ? "hann" : "rect"; }

Window parse_window(const std::string& text) {
  if (text == "hann") return Window::Hann;
  if (text == "rect") return Window::Rect;
  throw Error(Errc::InvalidConfig, "window '" + text + "' (expected hann or rect)");
}

void check_bands(const BandPartition& b) {
  if (!(0.0 < b.low_hi && b.low_hi < b.mid_hi && b.mid_hi < 1.0)) {
    throw Error(Errc::InvalidConfig, "band edges must satisfy 0 < low < mid < 1");
  }
}

std::vector<double> window_coefficients(Window w, std::size_t n) {
  std::vector<double> c(n, 1.0);
  if (w == Window::Hann) {
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }
  }
  return c;
}

std::vector<double> prepare_signal(std::span<const double> series, const SpectrumOptions& opts) {
  const std::size_t n = series.size();
  const std::size_t len = opts.pad == PadPolicy::NextPow2 ? next_pow2(n) : n;
  std::vector<double> x(len, 0.0);
  const double mean =
      opts.remove_mean ? std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n) : 0.0;
  const auto win = window_coefficients(opts.window, n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (series[i] - mean) * win[i];
  return x;
}

PowerSpectrum psd(std::span<const double> values, const SpectrumOptions& opts) {
  if (values.size() < kMinSeriesLength) {
    throw Error(Errc::TooShort, "series of length " + std::to_string(values.size()) + " (need at least " +
                                    std::to_string(kMinSeriesLength) + ")");
  }
  const auto x = prepare_signal(values, opts);
  const auto spectrum = real_dft(x);
  const std::size_t len = x.size();
  const std::size_t bins = len / 2 + 1;

  PowerSpectrum out;
  out.window = opts.window;
  out.padded_len = len;
  out.source_len = values.size();
  out.dc_excluded = opts.remove_mean;
  out.power.resize(bins);
  out.freq_norm.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out.power[k] = std::norm(spectrum[k]);
    out.freq_norm[k] = 2.0 * static_cast<double>(k) / static_cast<double>(len);
  }
  return out;
}

PowerSpectrum psd(const Series& series, const SpectrumOptions& opts) { return psd(series.values, opts); }

PowerSpectrum spectrum_from_power(std::vector<double> power, bool dc_excluded) {
  PowerSpectrum out;
  const std::size_t bins = power.size();
  if (bins < 2) throw Error(Errc::TooShort, "spectrum needs at least two bins");
  out.power = std::move(power);
  out.freq_norm.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) out.freq_norm[k] = static_cast<double>(k) / static_cast<double>(bins - 1);
  out.window = Window::Rect;
  out.padded_len = 2 * (bins - 1);
  out.source_len = out.padded_len;
  out.dc_excluded = dc_excluded;
  return out;
}

double total_power(const PowerSpectrum& s) {
  const auto a = s.analyzed();
  return std::accumulate(a.begin(), a.end(), 0.0);
}

int band_of(double f, const BandPartition& b) noexcept {
  if (f < b.low_hi) return 0;
  if (f < b.mid_hi) return 1;
  return 2;
}

namespace {

double checked_total(const PowerSpectrum& s) {
  const double total = total_power(s);
  if (!(total >= kDivisionFloor)) {
    throw Error(Errc::ZeroSpectrum, "total analyzed power " + std::to_string(total) + " below 1e-10");
  }
  return total;
}

}  // namespace

BandShares band_power(const PowerSpectrum& s, const BandPartition& bands) {
  check_bands(bands);
  const double total = checked_total(s);
  double acc[3] = {0.0, 0.0, 0.0};
  for (std::size_t k = s.first_bin(); k < s.power.size(); ++k) acc[band_of(s.freq_norm[k], bands)] += s.power[k];
  return {acc[0] / total, acc[1] / total, acc[2] / total};
}

Selectivity frequency_selectivity(const PowerSpectrum& s) {
  const double total = checked_total(s);
  const auto a = s.analyzed();
  const double peak = *std::max_element(a.begin(), a.end());
  const double rest = total - peak;
  if (rest < kDivisionFloor) return {peak / kDivisionFloor, true};
  return {peak / rest, false};
}

std::size_t dominant_bin(const PowerSpectrum& s) {
  const auto a = s.analyzed();
  if (a.empty()) throw Error(Errc::ZeroSpectrum, "no analyzed bins");
  return s.first_bin() + static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin());
}

}  // namespace wavescope
