#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wavescope/config.hpp"
#include "wavescope/ingest.hpp"
#include "wavescope/spectral.hpp"
#include "wavescope/uncertainty.hpp"
#include "wavescope/wavelet.hpp"

namespace wavescope {

// Flag names recorded on heads. Parameterized flags append "@<alpha>" or "@<window>".
namespace flag {
inline constexpr const char* kZeroSpectrum = "zero_spectrum";
inline constexpr const char* kSelectivitySaturated = "selectivity_saturated";
inline constexpr const char* kDegenerateReconstruction = "degenerate_reconstruction";
inline constexpr const char* kDegenerateScale = "degenerate_wavelet_scale";
inline constexpr const char* kScaleTooShort = "scale_too_short";
inline constexpr const char* kZeroNorm = "zero_norm";
inline constexpr const char* kWindowTooLarge = "window_too_large";
inline constexpr const char* kInsufficientSamples = "insufficient_samples";
inline constexpr const char* kDegenerateVariance = "degenerate_variance";
inline constexpr const char* kEntropyOutOfBounds = "entropy_out_of_bounds";
}  // namespace flag

struct HeadMetrics {
  HeadId head_id;
  std::size_t samples = 0;
  std::optional<double> spectral_entropy;
  std::optional<double> frequency_selectivity;
  std::optional<BandShares> band_shares;
  std::vector<std::pair<double, std::optional<double>>> scale_sens;  // alpha -> S
  std::optional<double> positional_entropy;
  std::vector<std::optional<double>> wavelet_entropy_per_scale;      // levels 1..J, then approximation
  std::optional<double> reconstruction_error;
  std::optional<double> locality_ratio;
  std::vector<std::pair<std::size_t, std::optional<double>>> window_entropy;  // window -> mean entropy
  std::optional<double> rho;  // position-spectrum correlation across samples
  std::set<std::string> flags;
};

/// Named scalar view of a head, in a fixed order; nullopt marks a metric excluded for this head.
std::vector<std::pair<std::string, std::optional<double>>> scalar_metrics(const HeadMetrics& head);

std::string scale_key(double alpha);         // "scale_sens@0.5"
std::string window_key(std::size_t window);  // "window_entropy@16"

struct MetricStats {
  std::size_t count = 0;
  std::size_t excluded = 0;
  double mean = 0.0;
  double std = 0.0;  // population
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
};

/// Type-7 (linear interpolation) quantile of sorted data: rank p (k - 1).
double quantile_sorted(std::span<const double> sorted, double p);

/// Mean, population sigma and IQR; throws AllFlagged on empty input.
MetricStats describe(std::span<const double> values);

struct LayerSummary {
  std::size_t layer = 0;
  std::size_t heads = 0;
  std::map<std::string, MetricStats> metrics;
  std::optional<double> rho;
  std::optional<FrameBounds> frame_bounds;
};

struct RunReport {
  std::vector<Manifest> inputs;
  AnalysisConfig config;
  std::size_t renormalized_rows = 0;
  std::vector<HeadMetrics> heads;
  std::vector<LayerSummary> layers;
  std::map<std::string, MetricStats> model;                      // heads pooled across layers
  std::map<std::string, std::optional<double>> model_layer_mean;  // unweighted mean of layer means
  std::optional<double> rho_model;                                // mean of layer rho values

  /// Source shared by all inputs, or the sources joined by ';'.
  std::string source() const;
  std::string model_name() const;
};

/// Per-layer and model-level statistics and correlation means over `heads`.
RunReport aggregate(std::vector<HeadMetrics> heads, const AnalysisConfig& config);

/// Mean of |i - j| <= w mass per row of a row-major n x n matrix.
double locality_ratio(std::span<const double> matrix, std::size_t n, std::size_t bandwidth);

struct LayerBandRow {
  std::size_t layer = 0;
  std::size_t heads = 0;
  std::optional<BandShares> shares;  // unset when every head in the layer is flagged
};

std::vector<LayerBandRow> layer_frequency_profile(const RunReport& run);

enum class LabelField { Source, Model };

struct ComparisonTable {
  std::string label_header = "source";
  std::vector<std::string> keys;
  struct Row {
    std::string label;
    std::string source;
    std::vector<std::optional<double>> values;
  };
  std::vector<Row> rows;
  std::vector<std::string> warnings;
};

/// Value of a comparison key: a model metric name (pooled mean), "<metric>.std",
/// "<metric>.iqr", "<metric>.layer_mean", "heads", "rho", or "band_<x>_pct" / "low_freq_power_pct".
std::optional<double> lookup_metric(const RunReport& run, const std::string& key);

/// Natural order: digit runs compare numerically.
bool natural_less(const std::string& a, const std::string& b);

ComparisonTable compare_runs(std::span<const RunReport> reports, std::span<const std::string> keys,
                             LabelField label = LabelField::Source);

/// Display text of one comparison cell ("-" for missing values).
std::string format_cell(const std::string& key, std::optional<double> value);

enum class Format { Json, Csv, Markdown };

Format parse_format(const std::string& text);

std::string render_json(const RunReport& run);
std::string render_csv(const RunReport& run);
std::string render_markdown(const RunReport& run);
std::string render(const RunReport& run, Format format);

std::string render(const ComparisonTable& table, Format format);
std::string render_layer_profile(const std::vector<LayerBandRow>& rows, int digits);

RunReport parse_run_report(const std::string& json_text);
RunReport read_run_report(const std::filesystem::path& path);

/// Writes text exactly as given (binary mode, no newline translation).
void write_text(const std::filesystem::path& path, const std::string& text);

template <class T>
void emit(const T& value, Format format, const std::filesystem::path& path) {
  write_text(path, render(value, format));
}

}  // namespace wavescope
