#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavescope/ingest.hpp"
#include "wavescope/spectral.hpp"
#include "wavescope/wavelet.hpp"

namespace wavescope {

enum class EntropyBase { Nats, Bits };

std::string to_string(EntropyBase base);
EntropyBase parse_entropy_base(const std::string& text);

/// Converts a value in nats to the requested base.
double in_base(double nats, EntropyBase base) noexcept;

// Effective analysis settings. Serialized verbatim as a report's provenance
// block, and accepted in the same shape as a config file.
struct AnalysisConfig {
  BandPartition bands;
  std::string wavelet = "db2";
  BoundaryMode boundary = BoundaryMode::Periodic;
  std::vector<std::size_t> window_sizes = {16, 32, 64};
  std::vector<double> alphas = {0.5, 0.25};
  std::optional<RowMode> row_mode;  // unset: use each manifest's row_mode
  bool dc_exclusion = true;
  EntropyBase entropy_base = EntropyBase::Nats;
  std::uint64_t seed = 0;
  Window window = Window::Hann;
  PadPolicy pad = PadPolicy::NextPow2;
  std::optional<std::size_t> levels;  // unset: max level of the shortest sequence
  bool normalize_wavelet_entropy = true;
  std::size_t locality_bandwidth = 2;
  std::size_t frame_probes = 256;
  int float_digits = 6;

  SpectrumOptions spectrum_options() const { return {window, pad, dc_exclusion}; }
};

void check_config(const AnalysisConfig& config);

nlohmann::json config_to_json(const AnalysisConfig& config);

/// Overlays the keys present in `j` onto `base`; unknown keys are rejected.
AnalysisConfig config_from_json(const nlohmann::json& j, AnalysisConfig base = {});

AnalysisConfig read_config(const std::filesystem::path& path);

/// Canonical text of a double: shortest round-trip form.
std::string format_number(double v);

/// "0.5,0.25" -> {0.5, 0.25}
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace wavescope
