#include "wavescope/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavescope/error.hpp"

namespace wavescope {

double positional_entropy(const Series& series) {
  const double sum = std::accumulate(series.values.begin(), series.values.end(), 0.0);
  if (!series.normalized || std::abs(sum - 1.0) > 1e-6) {
    throw Error(Errc::NotNormalized, "series sums to " + std::to_string(sum));
  }
  double h = 0.0;
  for (double p : series.values) {
    if (p > 0.0) h -= p * std::log(std::max(p, kDivisionFloor));
  }
  return std::max(h, 0.0);
}

double spectral_entropy(const PowerSpectrum& spectrum) {
  const double total = total_power(spectrum);
  if (!(total >= kDivisionFloor)) throw Error(Errc::ZeroSpectrum, "total analyzed power below 1e-10");
  double h = 0.0;
  for (double p : spectrum.analyzed()) {
    const double q = p / total;
    if (q > 0.0) h -= q * std::log(std::max(q, kDivisionFloor));
  }
  return std::max(h, 0.0);
}

CorrelationResult pos_spec_correlation(std::span<const EntropyPair> pairs) {
  const std::size_t n = pairs.size();
  if (n < 2) throw Error(Errc::InsufficientSamples, std::to_string(n) + " sample(s), need 2");
  double mx = 0.0, my = 0.0;
  for (const auto& p : pairs) {
    mx += p.positional;
    my += p.spectral;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : pairs) {
    const double dx = p.positional - mx;
    const double dy = p.spectral - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double sx = std::sqrt(sxx / static_cast<double>(n));
  const double sy = std::sqrt(syy / static_cast<double>(n));
  CorrelationResult r;
  r.n_samples = n;
  r.scope = CorrelationScope::Head;
  if (sx < kDivisionFloor || sy < kDivisionFloor) {
    r.degenerate = true;
    r.rho = 0.0;
    return r;
  }
  r.rho = std::clamp(sxy / static_cast<double>(n) / (sx * sy), -1.0, 1.0);
  return r;
}

CorrelationResult aggregate_correlation(std::span<const CorrelationResult> results, CorrelationScope scope) {
  if (results.empty()) throw Error(Errc::EmptyInput, "no correlations to aggregate");
  const CorrelationScope expected = scope == CorrelationScope::Layer ? CorrelationScope::Head : CorrelationScope::Layer;
  if (scope == CorrelationScope::Head) throw Error(Errc::InvalidConfig, "cannot aggregate into head scope");
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& r : results) {
    if (r.scope != expected) throw Error(Errc::InvalidConfig, "mixed correlation scopes");
    if (r.degenerate) continue;
    sum += r.rho;
    ++used;
  }
  CorrelationResult out;
  out.scope = scope;
  out.n_samples = used;
  if (used == 0) {
    out.degenerate = true;
    return out;
  }
  out.rho = sum / static_cast<double>(used);
  return out;
}

}  // namespace wavescope
