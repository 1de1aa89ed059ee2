#include "wavescope/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "wavescope/error.hpp"
#include "wavescope/random.hpp"

namespace wavescope {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

Mat2 rope_rotation(double position, double theta) {
  const double a = position * theta;
  const double c = std::cos(a), s = std::sin(a);
  return {c, -s, s, c};
}

Mat2 multiply(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

std::vector<double> rope_angles(const RopeConfig& config) {
  if (config.head_dim == 0 || config.head_dim % 2 != 0) {
    throw Error(Errc::OddHeadDim, "head_dim " + std::to_string(config.head_dim) + " must be even and positive");
  }
  const std::size_t pairs = config.head_dim / 2;
  std::vector<double> angles(pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    angles[k] = config.theta ? *config.theta
                             : std::pow(config.theta_base, -2.0 * static_cast<double>(k) /
                                                               static_cast<double>(config.head_dim));
  }
  return angles;
}

std::vector<double> rotate(std::span<const double> vec, double position, std::span<const double> angles) {
  std::vector<double> out(vec.size());
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const Mat2 r = rope_rotation(position, angles[k]);
    const double x = vec[2 * k], y = vec[2 * k + 1];
    out[2 * k] = r[0] * x + r[1] * y;
    out[2 * k + 1] = r[2] * x + r[3] * y;
  }
  return out;
}

std::vector<double> rope_logits(const RopeConfig& config, std::span<const double> query, std::span<const double> key) {
  const auto angles = rope_angles(config);
  if (query.size() != config.head_dim || key.size() != config.head_dim) {
    throw Error(Errc::DimensionMismatch, "query/key length must equal head_dim");
  }
  const std::size_t n = config.seq_len;
  const double scale = 1.0 / std::sqrt(static_cast<double>(config.head_dim));
  std::vector<std::vector<double>> keys(n);
  for (std::size_t j = 0; j < n; ++j) keys[j] = rotate(key, static_cast<double>(j), angles);
  std::vector<double> logits(n * n);
  for (std::size_t m = 0; m < n; ++m) {
    const auto q = rotate(query, static_cast<double>(m), angles);
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * keys[j][d];
      logits[m * n + j] = (config.causal && j > m) ? kNegInf : dot * scale;
    }
  }
  return logits;
}

void softmax_rows(std::span<double> matrix, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    auto row = matrix.subspan(i * n, n);
    const double peak = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double& v : row) {
      v = v == kNegInf ? 0.0 : std::exp(v - peak);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

std::vector<double> rope_attention(const RopeConfig& config, std::span<const double> query,
                                   std::span<const double> key) {
  auto m = rope_logits(config, query, key);
  softmax_rows(m, config.seq_len);
  return m;
}

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Rope: return "rope";
    case SynthKind::Sine: return "sine";
    case SynthKind::Local: return "local";
    case SynthKind::Global: return "global";
    case SynthKind::Uniform: return "uniform";
    case SynthKind::OneHot: return "onehot";
    case SynthKind::Bump: return "bump";
  }
  return "uniform";
}

SynthKind parse_synth_kind(const std::string& text) {
  for (auto k : {SynthKind::Rope, SynthKind::Sine, SynthKind::Local, SynthKind::Global, SynthKind::Uniform,
                 SynthKind::OneHot, SynthKind::Bump}) {
    if (to_string(k) == text) return k;
  }
  throw Error(Errc::InvalidSpec, "unknown kind '" + text + "'");
}

std::string SynthSpec::describe() const {
  std::ostringstream os;
  os << "synth kind=" << to_string(kind);
  switch (kind) {
    case SynthKind::Sine: os << " freq=" << shortest(freq_norm); break;
    case SynthKind::Local: os << " bandwidth=" << bandwidth; break;
    case SynthKind::Bump: os << " width=" << shortest(width); break;
    case SynthKind::Rope:
      os << " head_dim=" << head_dim;
      if (theta) {
        os << " theta=" << shortest(*theta);
      } else {
        os << " theta_base=" << shortest(theta_base);
      }
      os << " logit_scale=" << shortest(logit_scale);
      break;
    default: break;
  }
  if (kind == SynthKind::Rope && causal) os << " causal";
  os << " layers=" << layers << " heads=" << heads << " seq_len=" << seq_len << " seed=" << seed;
  return os.str();
}

void check_spec(const SynthSpec& s) {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidSpec, what); };
  if (s.layers == 0 || s.heads == 0) fail("layers and heads must be positive");
  if (s.seq_len < kMinSeriesLength) fail("seq_len must be at least " + std::to_string(kMinSeriesLength));
  if (s.seq_len > 8192) fail("seq_len above 8192");
  if (!(s.freq_norm > 0.0 && s.freq_norm <= 1.0)) fail("freq must lie in (0, 1]");
  if (s.bandwidth < 1) fail("bandwidth must be at least 1");
  if (!(s.width > 0.0) || !std::isfinite(s.width)) fail("width must be positive");
  if (s.head_dim == 0 || s.head_dim % 2 != 0) fail("head_dim must be even and positive");
  if (!(s.theta_base > 0.0)) fail("theta_base must be positive");
  if (s.theta && !std::isfinite(*s.theta)) fail("theta must be finite");
  if (!std::isfinite(s.logit_scale) || s.logit_scale < 0.0) fail("logit_scale must be finite and non-negative");
}

Series gaussian_bump(std::size_t n, double center, double width) {
  std::vector<double> v(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double z = (static_cast<double>(t) - center) / width;
    v[t] = std::exp(-0.5 * z * z);
  }
  return normalized_series(std::move(v));
}

std::vector<double> generate_head(const SynthSpec& spec, std::size_t layer, std::size_t head) {
  const std::size_t n = spec.seq_len;
  Rng rng(derive_seed(spec.seed, layer * spec.heads + head));
  std::vector<double> m(n * n, 0.0);
  switch (spec.kind) {
    case SynthKind::Uniform:
      std::fill(m.begin(), m.end(), 1.0 / static_cast<double>(n));
      break;
    case SynthKind::OneHot:
      for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
      break;
    case SynthKind::Global:
      for (double& v : m) v = 0.1 * rng.normal();
      softmax_rows(m, n);
      break;
    case SynthKind::Local:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t dist = i > j ? i - j : j - i;
          m[i * n + j] = dist <= spec.bandwidth ? 0.5 * rng.normal() : kNegInf;
        }
      }
      softmax_rows(m, n);
      break;
    case SynthKind::Sine: {
      const double phase = 2.0 * std::numbers::pi * rng.uniform();
      std::vector<double> row(n);
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = 1.0 + std::cos(std::numbers::pi * spec.freq_norm * static_cast<double>(j) + phase);
      }
      const double sum = std::accumulate(row.begin(), row.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = row[j] / sum;
      }
      break;
    }
    case SynthKind::Bump: {
      const double center = rng.uniform(0.0, static_cast<double>(n - 1));
      const auto bump = gaussian_bump(n, center, spec.width);
      for (std::size_t i = 0; i < n; ++i) std::copy(bump.values.begin(), bump.values.end(), m.begin() + static_cast<std::ptrdiff_t>(i * n));
      break;
    }
    case SynthKind::Rope: {
      RopeConfig cfg{spec.head_dim, spec.theta_base, n, spec.seed, spec.theta, spec.causal};
      std::vector<double> q(spec.head_dim);
      double norm2 = 0.0;
      for (double& v : q) {
        v = rng.normal();
        norm2 += v * v;
      }
      // ||q||^2 / sqrt(d) == logit_scale, with key == query
      const double target = spec.logit_scale * std::sqrt(static_cast<double>(spec.head_dim));
      const double s = norm2 > 0.0 ? std::sqrt(target / norm2) : 0.0;
      for (double& v : q) v *= s;
      m = rope_attention(cfg, q, q);
      break;
    }
  }
  return m;
}

AttentionDump generate(const SynthSpec& spec) {
  check_spec(spec);
  const std::size_t n = spec.seq_len;
  Tensor4 t;
  t.shape = {spec.layers, spec.heads, n, n};
  t.source_dtype = spec.dtype;
  t.data.resize(t.size());
  for (std::size_t l = 0; l < spec.layers; ++l) {
    for (std::size_t h = 0; h < spec.heads; ++h) {
      const auto m = generate_head(spec, l, h);
      std::copy(m.begin(), m.end(), t.data.begin() + static_cast<std::ptrdiff_t>(t.offset(l, h, 0, 0)));
    }
  }
  if (spec.dtype == Dtype::f32) {
    for (double& v : t.data) v = static_cast<double>(static_cast<float>(v));
  }
  Manifest manifest;
  manifest.model_name = spec.model_name;
  manifest.num_layers = spec.layers;
  manifest.num_heads = spec.heads;
  manifest.seq_len = n;
  manifest.dtype = spec.dtype;
  manifest.row_mode = RowMode::rows_mean();
  manifest.source = spec.describe();
  manifest.sequence_id = "synth-" + std::to_string(spec.seed);
  return make_dump(std::move(manifest), std::move(t));
}

}  // namespace wavescope
