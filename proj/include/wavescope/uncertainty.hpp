#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wavescope/ingest.hpp"
#include "wavescope/spectral.hpp"

namespace wavescope {

struct HeadId {
  std::size_t layer = 0;
  std::size_t head = 0;
  friend auto operator<=>(const HeadId&, const HeadId&) = default;
};

struct EntropyPair {
  double positional = 0.0;  // nats
  double spectral = 0.0;    // nats
  HeadId head_id;
  std::string sample_id;
};

enum class CorrelationScope { Head, Layer, Model };

struct CorrelationResult {
  double rho = 0.0;
  std::size_t n_samples = 0;
  CorrelationScope scope = CorrelationScope::Head;
  bool degenerate = false;  // a variable had (clamped) zero variance; rho reported as 0
};

/// Shannon entropy (nats) of a normalized series, log clamped at 1e-10.
double positional_entropy(const Series& series);

/// Entropy (nats) of the normalized analyzed bins of a spectrum.
double spectral_entropy(const PowerSpectrum& spectrum);

/// Pearson correlation of (positional, spectral) across samples of one head.
CorrelationResult pos_spec_correlation(std::span<const EntropyPair> pairs);

/// Unweighted mean of non-degenerate results one scope up (head -> layer -> model).
CorrelationResult aggregate_correlation(std::span<const CorrelationResult> results, CorrelationScope scope);

}  // namespace wavescope
