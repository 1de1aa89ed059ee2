#include "wavescope/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "wavescope/error.hpp"

namespace wavescope {

std::string scale_key(double alpha) { return "scale_sens@" + format_number(alpha); }
std::string window_key(std::size_t window) { return "window_entropy@" + std::to_string(window); }

std::vector<std::pair<std::string, std::optional<double>>> scalar_metrics(const HeadMetrics& h) {
  std::vector<std::pair<std::string, std::optional<double>>> out;
  out.emplace_back("spectral_entropy", h.spectral_entropy);
  out.emplace_back("frequency_selectivity",
                   h.flags.count(flag::kSelectivitySaturated) ? std::nullopt : h.frequency_selectivity);
  const auto& b = h.band_shares;
  out.emplace_back("band_low", b ? std::optional(b->low) : std::nullopt);
  out.emplace_back("band_mid", b ? std::optional(b->mid) : std::nullopt);
  out.emplace_back("band_high", b ? std::optional(b->high) : std::nullopt);
  out.emplace_back("positional_entropy", h.positional_entropy);
  out.emplace_back("reconstruction_error", h.reconstruction_error);
  out.emplace_back("locality_ratio", h.locality_ratio);
  for (const auto& [alpha, v] : h.scale_sens) out.emplace_back(scale_key(alpha), v);
  for (const auto& [w, v] : h.window_entropy) out.emplace_back(window_key(w), v);
  const std::size_t scales = h.wavelet_entropy_per_scale.size();
  for (std::size_t s = 0; s < scales; ++s) {
    const std::string name = s + 1 == scales ? "a" : "d" + std::to_string(s + 1);
    out.emplace_back("wavelet_entropy@" + name, h.wavelet_entropy_per_scale[s]);
  }
  return out;
}

double quantile_sorted(std::span<const double> s, double p) {
  if (s.empty()) throw Error(Errc::AllFlagged, "quantile of empty sample");
  const double rank = p * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  if (lo + 1 >= s.size()) return s.back();
  const double frac = rank - static_cast<double>(lo);
  return s[lo] + frac * (s[lo + 1] - s[lo]);
}

MetricStats describe(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::AllFlagged, "no unflagged values");
  MetricStats st;
  st.count = values.size();
  const auto k = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / k;
  double ss = 0.0;
  for (double v : values) ss += (v - st.mean) * (v - st.mean);
  st.std = std::sqrt(ss / k);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  st.q1 = quantile_sorted(sorted, 0.25);
  st.q3 = quantile_sorted(sorted, 0.75);
  st.iqr = std::max(0.0, st.q3 - st.q1);
  return st;
}

namespace {

std::map<std::string, MetricStats> summarize(const std::vector<const HeadMetrics*>& heads) {
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, std::size_t> excluded;
  for (const auto* h : heads) {
    for (const auto& [name, v] : scalar_metrics(*h)) {
      auto& bucket = values[name];
      if (v && std::isfinite(*v)) {
        bucket.push_back(*v);
      } else {
        ++excluded[name];
      }
    }
  }
  std::map<std::string, MetricStats> out;
  for (const auto& [name, vals] : values) {
    MetricStats st;
    if (!vals.empty()) st = describe(vals);
    st.excluded = excluded[name];
    out[name] = st;
  }
  return out;
}

CorrelationResult head_correlation(const HeadMetrics& h) {
  CorrelationResult r;
  r.scope = CorrelationScope::Head;
  r.rho = h.rho.value_or(0.0);
  r.n_samples = h.samples;
  r.degenerate = !h.rho || h.flags.count(flag::kDegenerateVariance) > 0;
  return r;
}

}  // namespace

RunReport aggregate(std::vector<HeadMetrics> heads, const AnalysisConfig& config) {
  if (heads.empty()) throw Error(Errc::EmptyInput, "no heads to aggregate");
  std::sort(heads.begin(), heads.end(), [](const auto& a, const auto& b) { return a.head_id < b.head_id; });
  RunReport run;
  run.config = config;
  run.heads = std::move(heads);

  std::vector<const HeadMetrics*> all;
  std::map<std::size_t, std::vector<const HeadMetrics*>> by_layer;
  for (const auto& h : run.heads) {
    all.push_back(&h);
    by_layer[h.head_id.layer].push_back(&h);
  }
  run.model = summarize(all);

  std::vector<CorrelationResult> layer_rhos;
  for (const auto& [layer, members] : by_layer) {
    LayerSummary ls;
    ls.layer = layer;
    ls.heads = members.size();
    ls.metrics = summarize(members);
    std::vector<CorrelationResult> head_rhos;
    for (const auto* h : members) head_rhos.push_back(head_correlation(*h));
    const auto layer_rho = aggregate_correlation(head_rhos, CorrelationScope::Layer);
    if (!layer_rho.degenerate) {
      ls.rho = layer_rho.rho;
      layer_rhos.push_back(layer_rho);
    }
    run.layers.push_back(std::move(ls));
  }
  if (!layer_rhos.empty()) {
    const auto model_rho = aggregate_correlation(layer_rhos, CorrelationScope::Model);
    if (!model_rho.degenerate) run.rho_model = model_rho.rho;
  }

  for (const auto& [name, _] : run.model) {
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto& ls : run.layers) {
      const auto it = ls.metrics.find(name);
      if (it != ls.metrics.end() && it->second.count > 0) {
        sum += it->second.mean;
        ++used;
      }
    }
    run.model_layer_mean[name] = used ? std::optional(sum / static_cast<double>(used)) : std::nullopt;
  }
  return run;
}

std::string RunReport::source() const {
  if (inputs.empty()) return "";
  std::string joined = inputs.front().source;
  bool same = true;
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    if (inputs[i].source != inputs.front().source) same = false;
  }
  if (same) return joined;
  for (std::size_t i = 1; i < inputs.size(); ++i) joined += ";" + inputs[i].source;
  return joined;
}

std::string RunReport::model_name() const { return inputs.empty() ? "" : inputs.front().model_name; }

double locality_ratio(std::span<const double> matrix, std::size_t n, std::size_t w) {
  if (n == 0 || matrix.size() != n * n) throw Error(Errc::DimensionMismatch, "matrix is not n x n");
  if (w >= n) throw Error(Errc::BadBandwidth, "bandwidth " + std::to_string(w) + " must be below " + std::to_string(n));
  double total = 0.0;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double mass = 0.0, near = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i * n + j];
      mass += v;
      if ((i > j ? i - j : j - i) <= w) near += v;
    }
    if (mass < kDivisionFloor) continue;
    total += near / mass;
    ++rows;
  }
  return rows ? std::clamp(total / static_cast<double>(rows), 0.0, 1.0) : 0.0;
}

std::vector<LayerBandRow> layer_frequency_profile(const RunReport& run) {
  std::size_t layers = 0;
  for (const auto& m : run.inputs) layers = std::max(layers, m.num_layers);
  for (const auto& h : run.heads) layers = std::max(layers, h.head_id.layer + 1);
  std::vector<LayerBandRow> rows(layers);
  std::vector<std::size_t> counted(layers, 0);
  std::vector<BandShares> sums(layers);
  for (std::size_t l = 0; l < layers; ++l) rows[l].layer = l;
  for (const auto& h : run.heads) {
    auto& row = rows[h.head_id.layer];
    ++row.heads;
    if (!h.band_shares) continue;
    auto& s = sums[h.head_id.layer];
    s.low += h.band_shares->low;
    s.mid += h.band_shares->mid;
    s.high += h.band_shares->high;
    ++counted[h.head_id.layer];
  }
  for (std::size_t l = 0; l < layers; ++l) {
    if (counted[l] == 0) continue;
    const auto k = static_cast<double>(counted[l]);
    rows[l].shares = BandShares{sums[l].low / k, sums[l].mid / k, sums[l].high / k};
  }
  return rows;
}

std::optional<double> lookup_metric(const RunReport& run, const std::string& key) {
  if (key == "heads") {
    return run.inputs.empty() ? std::nullopt : std::optional(static_cast<double>(run.inputs.front().num_heads));
  }
  if (key == "layers") {
    return run.inputs.empty() ? std::nullopt : std::optional(static_cast<double>(run.inputs.front().num_layers));
  }
  if (key == "rho") return run.rho_model;
  if (key == "low_freq_power_pct") return lookup_metric(run, "band_low_pct");
  if (key.size() > 4 && key.compare(key.size() - 4, 4, "_pct") == 0) {
    const auto v = lookup_metric(run, key.substr(0, key.size() - 4));
    return v ? std::optional(*v * 100.0) : std::nullopt;
  }
  std::string name = key;
  std::string field = "mean";
  if (const auto dot = key.rfind('.'); dot != std::string::npos) {
    const std::string suffix = key.substr(dot + 1);
    if (suffix == "mean" || suffix == "std" || suffix == "iqr" || suffix == "layer_mean") {
      name = key.substr(0, dot);
      field = suffix;
    }
  }
  if (field == "layer_mean") {
    const auto it = run.model_layer_mean.find(name);
    return it == run.model_layer_mean.end() ? std::nullopt : it->second;
  }
  const auto it = run.model.find(name);
  if (it == run.model.end() || it->second.count == 0) return std::nullopt;
  if (field == "std") return it->second.std;
  if (field == "iqr") return it->second.iqr;
  return it->second.mean;
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      std::string_view na(a.data() + i, ie - i), nb(b.data() + j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

ComparisonTable compare_runs(std::span<const RunReport> reports, std::span<const std::string> keys,
                             LabelField label) {
  if (reports.empty()) throw Error(Errc::EmptyInput, "no reports to compare");
  if (keys.empty()) throw Error(Errc::EmptyInput, "no metrics requested");
  std::vector<const RunReport*> order;
  for (const auto& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const RunReport* a, const RunReport* b) { return natural_less(a->source(), b->source()); });

  ComparisonTable table;
  table.label_header = label == LabelField::Source ? "source" : "model";
  table.keys.assign(keys.begin(), keys.end());
  for (const auto* r : order) {
    ComparisonTable::Row row;
    row.source = r->source();
    row.label = label == LabelField::Source ? row.source : r->model_name();
    for (const auto& k : keys) row.values.push_back(lookup_metric(*r, k));
    table.rows.push_back(std::move(row));
  }
  const auto reference = config_to_json(order.front()->config);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (config_to_json(order[i]->config) != reference) {
      table.warnings.push_back("provenance of '" + order[i]->source() + "' differs from '" + order.front()->source() +
                               "'");
    }
  }
  return table;
}

std::string format_cell(const std::string& key, std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return "-";
  char buf[64];
  if (key == "heads" || key == "layers") {
    std::snprintf(buf, sizeof buf, "%.0f", *value);
  } else if (key.size() > 4 && key.compare(key.size() - 4, 4, "_pct") == 0) {
    std::snprintf(buf, sizeof buf, "%.1f", *value);
  } else if (key.rfind("reconstruction_error", 0) == 0) {
    std::snprintf(buf, sizeof buf, "%.2e", *value);
  } else {
    std::snprintf(buf, sizeof buf, "%.3f", *value);
  }
  return buf;
}

}  // namespace wavescope
