#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavescope/ingest.hpp"

namespace wavescope {

// Row-major 2x2 matrix.
using Mat2 = std::array<double, 4>;

/// [[cos(m theta), -sin(m theta)], [sin(m theta), cos(m theta)]].
Mat2 rope_rotation(double position, double theta);
Mat2 multiply(const Mat2& a, const Mat2& b);

struct RopeConfig {
  std::size_t head_dim = 2;
  double theta_base = 10000.0;
  std::size_t seq_len = 16;
  std::uint64_t seed = 0;
  std::optional<double> theta;  // one angle shared by every pair instead of the geometric schedule
  bool causal = false;
};

/// Per-pair angles: theta_base^(-2k/head_dim) for k < head_dim/2, or the single override.
std::vector<double> rope_angles(const RopeConfig& config);

/// Applies the block-diagonal position-m rotation to a head_dim vector.
std::vector<double> rotate(std::span<const double> vec, double position, std::span<const double> angles);

/// Pre-softmax scores q_m . k_j / sqrt(head_dim), row-major n x n.
std::vector<double> rope_logits(const RopeConfig& config, std::span<const double> query, std::span<const double> key);

/// Row-wise max-subtracted softmax of rope_logits.
std::vector<double> rope_attention(const RopeConfig& config, std::span<const double> query,
                                   std::span<const double> key);

/// In-place row softmax of an n x n matrix; entries at -inf get zero weight.
void softmax_rows(std::span<double> matrix, std::size_t n);

enum class SynthKind { Rope, Sine, Local, Global, Uniform, OneHot, Bump };

std::string to_string(SynthKind kind);
SynthKind parse_synth_kind(const std::string& text);

struct SynthSpec {
  SynthKind kind = SynthKind::Uniform;
  std::size_t layers = 1;
  std::size_t heads = 1;
  std::size_t seq_len = 16;
  std::uint64_t seed = 0;
  double freq_norm = 0.5;        // sine: frequency in units of the Nyquist frequency
  std::size_t bandwidth = 2;     // local: |i - j| <= bandwidth
  double width = 2.0;            // bump: Gaussian standard deviation in tokens
  std::size_t head_dim = 2;      // rope
  double theta_base = 10000.0;   // rope
  std::optional<double> theta;   // rope: single shared angle
  double logit_scale = 2.0;      // rope: ||q||^2 / sqrt(head_dim)
  bool causal = false;           // rope: mask keys after the query
  std::string model_name = "synthetic";
  Dtype dtype = Dtype::f64;

  /// Compact description recorded in the manifest source field.
  std::string describe() const;
};

void check_spec(const SynthSpec& spec);

/// One n x n attention matrix for head (layer, head) of the spec.
std::vector<double> generate_head(const SynthSpec& spec, std::size_t layer, std::size_t head);

/// Full dump; deterministic in (spec, seed), heads seeded independently.
AttentionDump generate(const SynthSpec& spec);

/// Gaussian bump exp(-(t - center)^2 / (2 width^2)) normalized to unit sum.
Series gaussian_bump(std::size_t n, double center, double width);

}  // namespace wavescope
