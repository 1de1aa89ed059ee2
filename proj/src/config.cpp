#include "wavescope/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "wavescope/error.hpp"

namespace wavescope {

using nlohmann::json;

std::string to_string(EntropyBase base) { return base == EntropyBase::Nats ? "nats" : "bits"; }

EntropyBase parse_entropy_base(const std::string& text) {
  if (text == "nats") return EntropyBase::Nats;
  if (text == "bits") return EntropyBase::Bits;
  throw Error(Errc::InvalidConfig, "entropy base '" + text + "' (expected nats or bits)");
}

double in_base(double nats, EntropyBase base) noexcept {
  return base == EntropyBase::Nats ? nats : nats / std::numbers::ln2;
}

void check_config(const AnalysisConfig& c) {
  check_bands(c.bands);
  make_filter_bank(c.wavelet);
  if (c.alphas.empty()) throw Error(Errc::InvalidConfig, "at least one alpha is required");
  for (double a : c.alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw Error(Errc::InvalidConfig, "alpha " + format_number(a) + " outside (0, 1]");
  }
  for (std::size_t w : c.window_sizes) {
    if (w < 4) throw Error(Errc::InvalidConfig, "window size " + std::to_string(w) + " below 4");
  }
  if (c.levels && *c.levels < 1) throw Error(Errc::InvalidConfig, "levels must be at least 1");
  if (c.float_digits < 1 || c.float_digits > 17) throw Error(Errc::InvalidConfig, "float_digits must be in 1..17");
  if (c.frame_probes < 1) throw Error(Errc::InvalidConfig, "frame_probes must be at least 1");
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json config_to_json(const AnalysisConfig& c) {
  json j;
  j["bands"] = json::array({c.bands.low_hi, c.bands.mid_hi});
  j["wavelet"] = c.wavelet;
  j["boundary"] = to_string(c.boundary);
  j["windows"] = c.window_sizes;
  j["alphas"] = c.alphas;
  j["row_mode"] = c.row_mode ? json(to_string(*c.row_mode)) : json(nullptr);
  j["dc_exclude"] = c.dc_exclusion;
  j["base"] = to_string(c.entropy_base);
  j["seed"] = c.seed;
  j["window"] = to_string(c.window);
  j["pad"] = c.pad == PadPolicy::NextPow2 ? "pow2" : "none";
  j["levels"] = c.levels ? json(*c.levels) : json(nullptr);
  j["wavelet_entropy"] = c.normalize_wavelet_entropy ? "normalized" : "literal";
  j["locality_bandwidth"] = c.locality_bandwidth;
  j["frame_probes"] = c.frame_probes;
  j["float_digits"] = c.float_digits;
  return j;
}

AnalysisConfig config_from_json(const json& j, AnalysisConfig c) {
  static const std::set<std::string> keys = {
      "bands", "wavelet", "boundary", "windows", "alphas", "row_mode", "dc_exclude", "base", "seed",
      "window", "pad", "levels", "wavelet_entropy", "locality_bandwidth", "frame_probes", "float_digits"};
  if (!j.is_object()) throw Error(Errc::InvalidConfig, "config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (!keys.count(key)) throw Error(Errc::InvalidConfig, "unknown config key '" + key + "'");
      if (key == "bands") {
        const auto b = v.get<std::vector<double>>();
        if (b.size() != 2) throw Error(Errc::InvalidConfig, "bands needs two edges");
        c.bands = {b[0], b[1]};
      } else if (key == "wavelet") {
        c.wavelet = v.get<std::string>();
      } else if (key == "boundary") {
        c.boundary = parse_boundary(v.get<std::string>());
      } else if (key == "windows") {
        c.window_sizes = v.get<std::vector<std::size_t>>();
      } else if (key == "alphas") {
        c.alphas = v.get<std::vector<double>>();
      } else if (key == "row_mode") {
        c.row_mode = v.is_null() ? std::nullopt : std::optional<RowMode>(parse_row_mode(v.get<std::string>()));
      } else if (key == "dc_exclude") {
        c.dc_exclusion = v.get<bool>();
      } else if (key == "base") {
        c.entropy_base = parse_entropy_base(v.get<std::string>());
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "window") {
        c.window = parse_window(v.get<std::string>());
      } else if (key == "pad") {
        const auto p = v.get<std::string>();
        if (p != "pow2" && p != "none") throw Error(Errc::InvalidConfig, "pad must be pow2 or none");
        c.pad = p == "pow2" ? PadPolicy::NextPow2 : PadPolicy::None;
      } else if (key == "levels") {
        c.levels = v.is_null() ? std::nullopt : std::optional<std::size_t>(v.get<std::size_t>());
      } else if (key == "wavelet_entropy") {
        const auto m = v.get<std::string>();
        if (m != "normalized" && m != "literal") {
          throw Error(Errc::InvalidConfig, "wavelet_entropy must be normalized or literal");
        }
        c.normalize_wavelet_entropy = m == "normalized";
      } else if (key == "locality_bandwidth") {
        c.locality_bandwidth = v.get<std::size_t>();
      } else if (key == "frame_probes") {
        c.frame_probes = v.get<std::size_t>();
      } else if (key == "float_digits") {
        c.float_digits = v.get<int>();
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  return c;
}

AnalysisConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  return config_from_json(j);
}

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T v{};
    const auto* first = item.data();
    const auto* last = item.data() + item.size();
    const auto res = std::from_chars(first, last, v);
    if (item.empty() || res.ec != std::errc{} || res.ptr != last) {
      throw Error(Errc::InvalidConfig, std::string("bad ") + what + " list '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(Errc::InvalidConfig, std::string("empty ") + what + " list");
  return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) { return parse_list<double>(text, "number"); }
std::vector<std::size_t> parse_size_list(const std::string& text) { return parse_list<std::size_t>(text, "integer"); }

}  // namespace wavescope
