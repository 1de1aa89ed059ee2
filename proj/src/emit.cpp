#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wavescope/error.hpp"
#include "wavescope/report.hpp"

namespace wavescope {

using nlohmann::json;

Format parse_format(const std::string& text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  if (text == "md" || text == "markdown") return Format::Markdown;
  throw Error(Errc::InvalidConfig, "format '" + text + "' (expected json, csv or md)");
}

namespace {

double round_digits(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

std::string fmt_g(double v, int digits) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string fmt_opt(std::optional<double> v, int digits) { return v && std::isfinite(*v) ? fmt_g(*v, digits) : ""; }

struct Emitter {
  int digits;

  json num(double v) const { return std::isfinite(v) ? json(round_digits(v, digits)) : json(nullptr); }
  json num(const std::optional<double>& v) const { return v ? num(*v) : json(nullptr); }

  json stats(const MetricStats& s) const {
    json j;
    j["count"] = s.count;
    j["excluded"] = s.excluded;
    const bool any = s.count > 0;
    j["mean"] = any ? num(s.mean) : json(nullptr);
    j["std"] = any ? num(s.std) : json(nullptr);
    j["q1"] = any ? num(s.q1) : json(nullptr);
    j["q3"] = any ? num(s.q3) : json(nullptr);
    j["iqr"] = any ? num(s.iqr) : json(nullptr);
    return j;
  }

  json stats_map(const std::map<std::string, MetricStats>& m) const {
    json j = json::object();
    for (const auto& [k, s] : m) j[k] = stats(s);
    return j;
  }

  json head(const HeadMetrics& h) const {
    json j;
    j["layer"] = h.head_id.layer;
    j["head"] = h.head_id.head;
    j["samples"] = h.samples;
    j["spectral_entropy"] = num(h.spectral_entropy);
    j["frequency_selectivity"] = num(h.frequency_selectivity);
    if (h.band_shares) {
      j["band_shares"] = {{"low", num(h.band_shares->low)},
                          {"mid", num(h.band_shares->mid)},
                          {"high", num(h.band_shares->high)}};
    } else {
      j["band_shares"] = nullptr;
    }
    json ss = json::array();
    for (const auto& [alpha, v] : h.scale_sens) ss.push_back({{"alpha", alpha}, {"value", num(v)}});
    j["scale_sensitivity"] = ss;
    j["positional_entropy"] = num(h.positional_entropy);
    json we = json::array();
    for (const auto& v : h.wavelet_entropy_per_scale) we.push_back(num(v));
    j["wavelet_entropy"] = we;
    j["reconstruction_error"] = num(h.reconstruction_error);
    j["locality_ratio"] = num(h.locality_ratio);
    json win = json::array();
    for (const auto& [w, v] : h.window_entropy) win.push_back({{"window", w}, {"value", num(v)}});
    j["window_entropy"] = win;
    j["rho"] = num(h.rho);
    j["flags"] = h.flags;
    return j;
  }
};

std::optional<double> opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

MetricStats parse_stats(const json& j) {
  MetricStats s;
  s.count = j.at("count").get<std::size_t>();
  s.excluded = j.at("excluded").get<std::size_t>();
  s.mean = opt(j.at("mean")).value_or(0.0);
  s.std = opt(j.at("std")).value_or(0.0);
  s.q1 = opt(j.at("q1")).value_or(0.0);
  s.q3 = opt(j.at("q3")).value_or(0.0);
  s.iqr = opt(j.at("iqr")).value_or(0.0);
  return s;
}

std::map<std::string, MetricStats> parse_stats_map(const json& j) {
  std::map<std::string, MetricStats> m;
  for (const auto& [k, v] : j.items()) m[k] = parse_stats(v);
  return m;
}

HeadMetrics parse_head(const json& j) {
  HeadMetrics h;
  h.head_id = {j.at("layer").get<std::size_t>(), j.at("head").get<std::size_t>()};
  h.samples = j.at("samples").get<std::size_t>();
  h.spectral_entropy = opt(j.at("spectral_entropy"));
  h.frequency_selectivity = opt(j.at("frequency_selectivity"));
  if (const auto& b = j.at("band_shares"); !b.is_null()) {
    h.band_shares = BandShares{b.at("low").get<double>(), b.at("mid").get<double>(), b.at("high").get<double>()};
  }
  for (const auto& e : j.at("scale_sensitivity")) h.scale_sens.emplace_back(e.at("alpha").get<double>(), opt(e.at("value")));
  h.positional_entropy = opt(j.at("positional_entropy"));
  for (const auto& e : j.at("wavelet_entropy")) h.wavelet_entropy_per_scale.push_back(opt(e));
  h.reconstruction_error = opt(j.at("reconstruction_error"));
  h.locality_ratio = opt(j.at("locality_ratio"));
  for (const auto& e : j.at("window_entropy")) {
    h.window_entropy.emplace_back(e.at("window").get<std::size_t>(), opt(e.at("value")));
  }
  h.rho = opt(j.at("rho"));
  h.flags = j.at("flags").get<std::set<std::string>>();
  return h;
}

// RFC 4180 field quoting.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_flags(const std::set<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

std::vector<std::string> head_columns(const RunReport& run) {
  std::vector<std::string> cols;
  std::set<std::string> seen;
  for (const auto& h : run.heads) {
    for (const auto& [name, _] : scalar_metrics(h)) {
      if (seen.insert(name).second) cols.push_back(name);
    }
  }
  return cols;
}

}  // namespace

std::string render_json(const RunReport& run) {
  const Emitter e{run.config.float_digits};
  json j;
  j["schema"] = "wavescope.run_report/1";
  json inputs = json::array();
  for (const auto& m : run.inputs) inputs.push_back(json::parse(manifest_to_json(m)));
  j["inputs"] = inputs;
  j["provenance"] = config_to_json(run.config);
  j["diagnostics"] = {{"renormalized_rows", run.renormalized_rows}};
  json heads = json::array();
  for (const auto& h : run.heads) heads.push_back(e.head(h));
  j["heads"] = heads;
  json layers = json::array();
  for (const auto& l : run.layers) {
    json lj;
    lj["layer"] = l.layer;
    lj["heads"] = l.heads;
    lj["rho"] = e.num(l.rho);
    lj["frame_bounds"] =
        l.frame_bounds ? json{{"lower", e.num(l.frame_bounds->lower)}, {"upper", e.num(l.frame_bounds->upper)}}
                       : json(nullptr);
    lj["metrics"] = e.stats_map(l.metrics);
    layers.push_back(lj);
  }
  j["layers"] = layers;
  json layer_mean = json::object();
  for (const auto& [k, v] : run.model_layer_mean) layer_mean[k] = e.num(v);
  j["model"] = {{"heads_pooled", e.stats_map(run.model)}, {"layer_mean", layer_mean}, {"rho", e.num(run.rho_model)}};
  return j.dump(2) + "\n";
}

RunReport parse_run_report(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport run;
    for (const auto& m : j.at("inputs")) run.inputs.push_back(parse_manifest(m.dump()));
    run.config = config_from_json(j.at("provenance"));
    run.renormalized_rows = j.at("diagnostics").at("renormalized_rows").get<std::size_t>();
    for (const auto& h : j.at("heads")) run.heads.push_back(parse_head(h));
    for (const auto& lj : j.at("layers")) {
      LayerSummary l;
      l.layer = lj.at("layer").get<std::size_t>();
      l.heads = lj.at("heads").get<std::size_t>();
      l.rho = opt(lj.at("rho"));
      if (const auto& fb = lj.at("frame_bounds"); !fb.is_null()) {
        l.frame_bounds = FrameBounds{fb.at("lower").get<double>(), fb.at("upper").get<double>()};
      }
      l.metrics = parse_stats_map(lj.at("metrics"));
      run.layers.push_back(std::move(l));
    }
    const auto& model = j.at("model");
    run.model = parse_stats_map(model.at("heads_pooled"));
    for (const auto& [k, v] : model.at("layer_mean").items()) run.model_layer_mean[k] = opt(v);
    run.rho_model = opt(model.at("rho"));
    return run;
  } catch (const json::exception& e) {
    throw Error(Errc::ManifestParse, std::string("run report: ") + e.what());
  }
}

RunReport read_run_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_report(ss.str());
}

std::string render_csv(const RunReport& run) {
  const int d = run.config.float_digits;
  const auto cols = head_columns(run);
  std::string out = "layer,head,samples";
  for (const auto& c : cols) out += "," + csv_field(c);
  out += ",rho,flags\r\n";
  for (const auto& h : run.heads) {
    out += std::to_string(h.head_id.layer) + "," + std::to_string(h.head_id.head) + "," + std::to_string(h.samples);
    const auto metrics = scalar_metrics(h);
    for (const auto& c : cols) {
      std::optional<double> v;
      for (const auto& [name, value] : metrics) {
        if (name == c) v = value;
      }
      out += "," + fmt_opt(v, d);
    }
    out += "," + fmt_opt(h.rho, d) + "," + csv_field(join_flags(h.flags)) + "\r\n";
  }
  return out;
}

std::string render_markdown(const RunReport& run) {
  const int d = run.config.float_digits;
  std::string out = "# " + run.model_name() + "\n\n";
  out += "source: " + run.source() + "\n\n";
  out += "| metric | mean | std | iqr | count | excluded | layer mean |\n";
  out += "|---|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& [name, s] : run.model) {
    const auto lm = run.model_layer_mean.count(name) ? run.model_layer_mean.at(name) : std::nullopt;
    auto cell = [&](double v) { return s.count ? fmt_g(v, d) : std::string("-"); };
    out += "| " + name + " | " + cell(s.mean) + " | " + cell(s.std) + " | " + cell(s.iqr) + " | " +
           std::to_string(s.count) + " | " + std::to_string(s.excluded) + " | " + (lm ? fmt_g(*lm, d) : "-") + " |\n";
  }
  out += "\nrho: " + (run.rho_model ? fmt_g(*run.rho_model, d) : std::string("-")) + "\n";
  return out;
}

std::string render(const RunReport& run, Format format) {
  switch (format) {
    case Format::Json: return render_json(run);
    case Format::Csv: return render_csv(run);
    case Format::Markdown: return render_markdown(run);
  }
  return {};
}

std::string render(const ComparisonTable& t, Format format) {
  std::string out;
  if (format == Format::Json) {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json values = json::object();
      for (std::size_t i = 0; i < t.keys.size(); ++i) {
        values[t.keys[i]] = r.values[i] ? json(round_digits(*r.values[i], 6)) : json(nullptr);
      }
      rows.push_back({{"label", r.label}, {"source", r.source}, {"values", values}});
    }
    json j = {{"keys", t.keys}, {"rows", rows}, {"warnings", t.warnings}};
    return j.dump(2) + "\n";
  }
  if (format == Format::Csv) {
    out = csv_field(t.label_header);
    for (const auto& k : t.keys) out += "," + csv_field(k);
    out += "\r\n";
    for (const auto& r : t.rows) {
      out += csv_field(r.label);
      for (const auto& v : r.values) out += "," + fmt_opt(v, 6);
      out += "\r\n";
    }
    return out;
  }
  out = "| " + t.label_header + " |";
  for (const auto& k : t.keys) out += " " + k + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < t.keys.size(); ++i) out += "---:|";
  out += "\n";
  for (const auto& r : t.rows) {
    out += "| " + r.label + " |";
    for (std::size_t i = 0; i < t.keys.size(); ++i) out += " " + format_cell(t.keys[i], r.values[i]) + " |";
    out += "\n";
  }
  return out;
}

std::string render_layer_profile(const std::vector<LayerBandRow>& rows, int digits) {
  std::string out = "layer,heads,low,mid,high\r\n";
  for (const auto& r : rows) {
    out += std::to_string(r.layer) + "," + std::to_string(r.heads) + ",";
    if (r.shares) {
      out += fmt_g(r.shares->low, digits) + "," + fmt_g(r.shares->mid, digits) + "," + fmt_g(r.shares->high, digits);
    } else {
      out += ",,";
    }
    out += "\r\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace wavescope
