#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wavescope/ingest.hpp"

namespace wavescope {

// Division guard shared by every ratio metric.
inline constexpr double kDivisionFloor = 1e-10;

enum class Window { Hann, Rect };
enum class PadPolicy { NextPow2, None };

std::string to_string(Window w);
Window parse_window(const std::string& text);

struct SpectrumOptions {
  Window window = Window::Hann;
  PadPolicy pad = PadPolicy::NextPow2;
  bool remove_mean = true;  // also excludes bin 0 from shares, selectivity and spectral entropy
};

// One-sided power spectrum over bins 0..padded_len/2.
struct PowerSpectrum {
  std::vector<double> power;
  std::vector<double> freq_norm;  // bin frequency in units of the Nyquist frequency
  Window window = Window::Hann;
  std::size_t padded_len = 0;     // transform length
  std::size_t source_len = 0;
  bool dc_excluded = false;

  /// First bin that participates in band shares, selectivity and entropy.
  std::size_t first_bin() const noexcept { return dc_excluded ? 1 : 0; }
  std::span<const double> analyzed() const noexcept {
    return std::span<const double>(power).subspan(first_bin());
  }
};

struct BandPartition {
  double low_hi = 0.25;
  double mid_hi = 0.75;
};

void check_bands(const BandPartition& bands);

struct BandShares {
  double low = 0.0;
  double mid = 0.0;
  double high = 0.0;
};

struct Selectivity {
  double value = 0.0;
  bool saturated = false;  // the off-peak power fell below the division floor
};

std::size_t next_pow2(std::size_t n) noexcept;

/// In-place iterative radix-2 transform; `data.size()` must be a power of two.
void fft_inplace(std::span<std::complex<double>> data);

/// Forward DFT of a real signal. Power-of-two lengths use the FFT, others an O(n^2) sum.
std::vector<std::complex<double>> real_dft(std::span<const double> signal);

/// Window coefficients of length n (periodic Hann).
std::vector<double> window_coefficients(Window w, std::size_t n);

/// Mean-removed (optional), windowed, zero-padded transform input.
std::vector<double> prepare_signal(std::span<const double> series, const SpectrumOptions& opts);

PowerSpectrum psd(const Series& series, const SpectrumOptions& opts = {});
PowerSpectrum psd(std::span<const double> values, const SpectrumOptions& opts = {});

/// Builds a spectrum directly from bin powers (bins 0..m, DC included unless dc_excluded).
PowerSpectrum spectrum_from_power(std::vector<double> power, bool dc_excluded = false);

double total_power(const PowerSpectrum& spectrum);

/// Band of a normalized frequency; a bin sitting on an edge belongs to the upper band.
int band_of(double freq_norm, const BandPartition& bands) noexcept;

BandShares band_power(const PowerSpectrum& spectrum, const BandPartition& bands = {});

Selectivity frequency_selectivity(const PowerSpectrum& spectrum);

/// Index (into spectrum.power) of the largest analyzed bin.
std::size_t dominant_bin(const PowerSpectrum& spectrum);

}  // namespace wavescope
