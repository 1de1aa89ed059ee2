#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wavescope {

// Orthonormal two-channel analysis pair. highpass[j] = (-1)^j lowpass[L-1-j].
struct FilterBank {
  std::string name;
  std::vector<double> lowpass;
  std::vector<double> highpass;
  int vanishing_moments = 0;

  std::size_t length() const noexcept { return lowpass.size(); }
};

/// Daubechies filters: "db1" (Haar), "db2", "db4".
FilterBank make_filter_bank(const std::string& name);

enum class BoundaryMode { Periodic, Symmetric };

std::string to_string(BoundaryMode mode);
BoundaryMode parse_boundary(const std::string& text);

struct WaveletDecomposition {
  std::vector<double> approx;                // coarsest approximation
  std::vector<std::vector<double>> details;  // details[0] is level 1 (finest)
  std::size_t levels = 0;
  BoundaryMode boundary = BoundaryMode::Periodic;
  std::size_t source_len = 0;
  std::string bank_name;
  std::size_t filter_len = 0;
  std::vector<std::size_t> input_lengths;  // signal length entering each level

  /// Scale s in 0..levels: details for s < levels, the approximation at s == levels.
  std::span<const double> scale(std::size_t s) const;
  std::size_t coefficient_count() const;
};

/// Largest J with (filter_len - 1) * 2^J <= n, i.e. floor(log2(n / (filter_len - 1))).
std::size_t max_level(std::size_t n, std::size_t filter_len) noexcept;

/// Multi-level pyramid transform. `levels` defaults to max_level(n, L).
WaveletDecomposition dwt(std::span<const double> signal, const FilterBank& bank,
                         std::optional<std::size_t> levels = std::nullopt,
                         BoundaryMode boundary = BoundaryMode::Periodic);

std::vector<double> idwt(const WaveletDecomposition& decomp, const FilterBank& bank);

struct ReconstructionError {
  double value = 0.0;
  bool degenerate = false;  // input norm below the division floor
};

/// Relative Frobenius round-trip error ||x - idwt(dwt(x))|| / ||x||.
ReconstructionError reconstruction_error(std::span<const double> signal, const FilterBank& bank,
                                         std::optional<std::size_t> levels = std::nullopt,
                                         BoundaryMode boundary = BoundaryMode::Periodic);

/// Same round trip carried out entirely in single precision.
ReconstructionError reconstruction_error_f32(std::span<const float> signal, const FilterBank& bank,
                                             std::optional<std::size_t> levels = std::nullopt,
                                             BoundaryMode boundary = BoundaryMode::Periodic);

struct ScaleEntropyProfile {
  std::vector<double> entropy_per_scale;  // levels 1..J, then the approximation
  std::vector<bool> degenerate;           // empty or zero-energy scale
  bool normalized = true;
};

/// Per-scale entropy of coefficient energies. With `normalize` the energies are
/// turned into a distribution first; otherwise -sum e log e on raw energies.
ScaleEntropyProfile scale_entropy(const WaveletDecomposition& decomp, bool normalize = true);

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Empirical frame bounds: extremes over probes f of sum_h <f, atom_h>^2 / ||f||^2.
FrameBounds frame_bounds(std::span<const std::vector<double>> atoms, std::span<const std::vector<double>> probes);

/// `count` Gaussian directions of length n normalized to unit norm.
std::vector<std::vector<double>> random_unit_probes(std::size_t n, std::size_t count, std::uint64_t seed);

}  // namespace wavescope
