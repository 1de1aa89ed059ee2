#include "wavescope/wavelet.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "wavescope/error.hpp"
#include "wavescope/random.hpp"

namespace wavescope {
namespace {

std::vector<double> quadrature_mirror(const std::vector<double>& h) {
  const std::size_t L = h.size();
  std::vector<double> g(L);
  for (std::size_t j = 0; j < L; ++j) g[j] = (j % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - j];
  return g;
}

// Half-sample symmetric extension: ... x1 x0 | x0 x1 ... x_{m-1} | x_{m-1} x_{m-2} ...
std::ptrdiff_t reflect(std::ptrdiff_t t, std::ptrdiff_t m) {
  const std::ptrdiff_t period = 2 * m;
  t %= period;
  if (t < 0) t += period;
  return t < m ? t : period - 1 - t;
}

std::ptrdiff_t wrap(std::ptrdiff_t t, std::ptrdiff_t m) {
  t %= m;
  return t < 0 ? t + m : t;
}

template <class T>
struct Level {
  std::vector<T> approx;
  std::vector<T> detail;
};

// Coefficient k correlates the filters with x[2k .. 2k+L-1]. Periodic mode first
// extends odd-length input by repeating its last sample.
template <class T>
Level<T> analyze(const std::vector<T>& x, const std::vector<T>& h, const std::vector<T>& g, BoundaryMode mode) {
  const auto L = static_cast<std::ptrdiff_t>(h.size());
  Level<T> out;
  if (mode == BoundaryMode::Periodic) {
    std::vector<T> ext = x;
    if (ext.size() % 2 == 1) ext.push_back(ext.back());
    const auto m = static_cast<std::ptrdiff_t>(ext.size());
    const auto half = static_cast<std::size_t>(m / 2);
    out.approx.assign(half, T(0));
    out.detail.assign(half, T(0));
    for (std::size_t k = 0; k < half; ++k) {
      T a = 0, d = 0;
      for (std::ptrdiff_t j = 0; j < L; ++j) {
        const T v = ext[static_cast<std::size_t>(wrap(2 * static_cast<std::ptrdiff_t>(k) + j, m))];
        a += h[static_cast<std::size_t>(j)] * v;
        d += g[static_cast<std::size_t>(j)] * v;
      }
      out.approx[k] = a;
      out.detail[k] = d;
    }
  } else {
    const auto m = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t k_min = -(L / 2 - 1);
    const std::ptrdiff_t k_max = (m - 1) / 2;
    const auto count = static_cast<std::size_t>(k_max - k_min + 1);
    out.approx.assign(count, T(0));
    out.detail.assign(count, T(0));
    for (std::ptrdiff_t k = k_min; k <= k_max; ++k) {
      T a = 0, d = 0;
      for (std::ptrdiff_t j = 0; j < L; ++j) {
        const T v = x[static_cast<std::size_t>(reflect(2 * k + j, m))];
        a += h[static_cast<std::size_t>(j)] * v;
        d += g[static_cast<std::size_t>(j)] * v;
      }
      out.approx[static_cast<std::size_t>(k - k_min)] = a;
      out.detail[static_cast<std::size_t>(k - k_min)] = d;
    }
  }
  return out;
}

// Transpose of analyze: x[t] = sum_k a[k] h[t-2k] + d[k] g[t-2k], truncated to `length`.
template <class T>
std::vector<T> synthesize(const std::vector<T>& a, const std::vector<T>& d, const std::vector<T>& h,
                          const std::vector<T>& g, BoundaryMode mode, std::size_t length) {
  const auto L = static_cast<std::ptrdiff_t>(h.size());
  if (mode == BoundaryMode::Periodic) {
    const auto m = static_cast<std::ptrdiff_t>(2 * a.size());
    std::vector<T> y(static_cast<std::size_t>(m), T(0));
    for (std::size_t k = 0; k < a.size(); ++k) {
      for (std::ptrdiff_t j = 0; j < L; ++j) {
        auto& dst = y[static_cast<std::size_t>(wrap(2 * static_cast<std::ptrdiff_t>(k) + j, m))];
        dst += h[static_cast<std::size_t>(j)] * a[k] + g[static_cast<std::size_t>(j)] * d[k];
      }
    }
    y.resize(length);
    return y;
  }
  const auto m = static_cast<std::ptrdiff_t>(length);
  const std::ptrdiff_t k_min = -(L / 2 - 1);
  std::vector<T> y(length, T(0));
  for (std::ptrdiff_t t = 0; t < m; ++t) {
    T acc = 0;
    // k with 0 <= t - 2k <= L - 1
    for (std::ptrdiff_t k = t / 2; 2 * k >= t - (L - 1); --k) {
      const auto idx = k - k_min;
      if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(a.size())) continue;
      const auto j = static_cast<std::size_t>(t - 2 * k);
      acc += h[j] * a[static_cast<std::size_t>(idx)] + g[j] * d[static_cast<std::size_t>(idx)];
    }
    y[static_cast<std::size_t>(t)] = acc;
  }
  return y;
}

std::size_t resolve_levels(std::size_t n, const FilterBank& bank, std::optional<std::size_t> levels) {
  if (n < bank.length()) {
    throw Error(Errc::TooShort, "signal of length " + std::to_string(n) + " shorter than " + bank.name + " filter");
  }
  const std::size_t cap = max_level(n, bank.length());
  if (!levels) {
    if (cap < 1) throw Error(Errc::TooShort, "length " + std::to_string(n) + " admits no " + bank.name + " level");
    return cap;
  }
  if (*levels < 1 || *levels > cap) {
    throw Error(Errc::TooManyLevels, std::to_string(*levels) + " levels requested, length " + std::to_string(n) +
                                         " admits 1.." + std::to_string(cap));
  }
  return *levels;
}

template <class T>
struct TypedDecomp {
  std::vector<T> approx;
  std::vector<std::vector<T>> details;
  std::vector<std::size_t> input_lengths;
};

template <class T>
TypedDecomp<T> forward(std::vector<T> x, const FilterBank& bank, std::size_t levels, BoundaryMode mode) {
  const std::vector<T> h(bank.lowpass.begin(), bank.lowpass.end());
  const std::vector<T> g(bank.highpass.begin(), bank.highpass.end());
  TypedDecomp<T> out;
  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    out.input_lengths.push_back(x.size());
    auto level = analyze(x, h, g, mode);
    out.details.push_back(std::move(level.detail));
    x = std::move(level.approx);
  }
  out.approx = std::move(x);
  return out;
}

template <class T>
std::vector<T> inverse(const TypedDecomp<T>& dec, const FilterBank& bank, BoundaryMode mode) {
  const std::vector<T> h(bank.lowpass.begin(), bank.lowpass.end());
  const std::vector<T> g(bank.highpass.begin(), bank.highpass.end());
  std::vector<T> a = dec.approx;
  for (std::size_t lvl = dec.details.size(); lvl-- > 0;) {
    a = synthesize(a, dec.details[lvl], h, g, mode, dec.input_lengths[lvl]);
  }
  return a;
}

template <class T>
ReconstructionError relative_error(const std::vector<T>& x, const std::vector<T>& y) {
  T num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - y[i]) * (x[i] - y[i]);
    den += x[i] * x[i];
  }
  const double norm = std::sqrt(static_cast<double>(den));
  if (norm < 1e-10) return {0.0, true};
  return {std::sqrt(static_cast<double>(num)) / norm, false};
}

}  // namespace

FilterBank make_filter_bank(const std::string& name) {
  FilterBank bank;
  bank.name = name;
  if (name == "db1") {
    const double r = 1.0 / std::numbers::sqrt2;
    bank.lowpass = {r, r};
    bank.vanishing_moments = 1;
  } else if (name == "db2") {
    const double s3 = std::numbers::sqrt3;
    const double d = 4.0 * std::numbers::sqrt2;
    bank.lowpass = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
    bank.vanishing_moments = 2;
  } else if (name == "db4") {
    // minimum-phase spectral factor, evaluated at 50 significant digits
    bank.lowpass = {0.23037781330889650086,  0.71484657055291564709,  0.63088076792985890788,
                    -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
                    0.032883011666885199735,  -0.010597401785069032105};
    bank.vanishing_moments = 4;
  } else {
    throw Error(Errc::UnknownWavelet, "'" + name + "' (supported: db1, db2, db4)");
  }
  bank.highpass = quadrature_mirror(bank.lowpass);
  return bank;
}

std::string to_string(BoundaryMode mode) { return mode == BoundaryMode::Periodic ? "periodic" : "symmetric"; }

BoundaryMode parse_boundary(const std::string& text) {
  if (text == "periodic") return BoundaryMode::Periodic;
  if (text == "symmetric") return BoundaryMode::Symmetric;
  throw Error(Errc::InvalidConfig, "boundary mode '" + text + "' (expected periodic or symmetric)");
}

std::span<const double> WaveletDecomposition::scale(std::size_t s) const {
  if (s < details.size()) return details[s];
  if (s == details.size()) return approx;
  throw Error(Errc::IndexOutOfRange, "scale " + std::to_string(s));
}

std::size_t WaveletDecomposition::coefficient_count() const {
  std::size_t n = approx.size();
  for (const auto& d : details) n += d.size();
  return n;
}

std::size_t max_level(std::size_t n, std::size_t filter_len) noexcept {
  if (filter_len < 2) return 0;
  const std::size_t support = filter_len - 1;
  std::size_t j = 0;
  while ((support << (j + 1)) <= n) ++j;
  return j;
}

WaveletDecomposition dwt(std::span<const double> signal, const FilterBank& bank, std::optional<std::size_t> levels,
                         BoundaryMode boundary) {
  const std::size_t J = resolve_levels(signal.size(), bank, levels);
  auto typed = forward(std::vector<double>(signal.begin(), signal.end()), bank, J, boundary);
  WaveletDecomposition out;
  out.approx = std::move(typed.approx);
  out.details = std::move(typed.details);
  out.input_lengths = std::move(typed.input_lengths);
  out.levels = J;
  out.boundary = boundary;
  out.source_len = signal.size();
  out.bank_name = bank.name;
  out.filter_len = bank.length();
  return out;
}

std::vector<double> idwt(const WaveletDecomposition& decomp, const FilterBank& bank) {
  if (decomp.bank_name != bank.name || decomp.filter_len != bank.length()) {
    throw Error(Errc::IncompatibleBank, "decomposition made with " + decomp.bank_name + ", inverting with " + bank.name);
  }
  if (decomp.details.size() != decomp.levels || decomp.input_lengths.size() != decomp.levels) {
    throw Error(Errc::IncompatibleBank, "decomposition metadata is inconsistent");
  }
  TypedDecomp<double> typed{decomp.approx, decomp.details, decomp.input_lengths};
  return inverse(typed, bank, decomp.boundary);
}

ReconstructionError reconstruction_error(std::span<const double> signal, const FilterBank& bank,
                                         std::optional<std::size_t> levels, BoundaryMode boundary) {
  const std::size_t J = resolve_levels(signal.size(), bank, levels);
  std::vector<double> x(signal.begin(), signal.end());
  const auto y = inverse(forward(x, bank, J, boundary), bank, boundary);
  return relative_error(x, y);
}

ReconstructionError reconstruction_error_f32(std::span<const float> signal, const FilterBank& bank,
                                             std::optional<std::size_t> levels, BoundaryMode boundary) {
  const std::size_t J = resolve_levels(signal.size(), bank, levels);
  std::vector<float> x(signal.begin(), signal.end());
  const auto y = inverse(forward(x, bank, J, boundary), bank, boundary);
  return relative_error(x, y);
}

ScaleEntropyProfile scale_entropy(const WaveletDecomposition& decomp, bool normalize) {
  ScaleEntropyProfile out;
  out.normalized = normalize;
  for (std::size_t s = 0; s <= decomp.details.size(); ++s) {
    const auto coeffs = decomp.scale(s);
    double total = 0.0;
    for (double c : coeffs) total += c * c;
    double h = 0.0;
    const bool degenerate = coeffs.empty() || total < 1e-10;
    if (normalize) {
      if (!degenerate) {
        for (double c : coeffs) {
          const double p = c * c / total;
          if (p > 0.0) h -= p * std::log(std::max(p, 1e-10));
        }
      }
    } else {
      for (double c : coeffs) {
        const double e = c * c;
        if (e > 0.0) h -= e * std::log(std::max(e, 1e-10));
      }
    }
    out.entropy_per_scale.push_back(h);
    out.degenerate.push_back(degenerate);
  }
  return out;
}

FrameBounds frame_bounds(std::span<const std::vector<double>> atoms, std::span<const std::vector<double>> probes) {
  if (atoms.empty()) throw Error(Errc::EmptyInput, "frame needs at least one atom");
  if (probes.empty()) throw Error(Errc::EmptyInput, "frame bounds need at least one probe");
  const std::size_t n = atoms.front().size();
  for (const auto& a : atoms) {
    if (a.size() != n) throw Error(Errc::DimensionMismatch, "atoms differ in length");
  }
  FrameBounds fb{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& f : probes) {
    if (f.size() != n) throw Error(Errc::DimensionMismatch, "probe length differs from atom length");
    double norm2 = 0.0;
    for (double v : f) norm2 += v * v;
    if (norm2 < 1e-10) throw Error(Errc::DimensionMismatch, "probe has zero norm");
    double captured = 0.0;
    for (const auto& a : atoms) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += f[i] * a[i];
      captured += dot * dot;
    }
    const double r = captured / norm2;
    fb.lower = std::min(fb.lower, r);
    fb.upper = std::max(fb.upper, r);
  }
  return fb;
}

std::vector<std::vector<double>> random_unit_probes(std::size_t n, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> probes(count, std::vector<double>(n));
  for (auto& p : probes) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& v : p) {
        v = rng.normal();
        norm2 += v * v;
      }
    } while (norm2 < 1e-20);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : p) v *= inv;
  }
  return probes;
}

}  // namespace wavescope
