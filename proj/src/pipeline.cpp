#include "wavescope/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "wavescope/error.hpp"
#include "wavescope/random.hpp"
#include "wavescope/scaleinv.hpp"
#include "wavescope/spectral.hpp"
#include "wavescope/uncertainty.hpp"
#include "wavescope/wavelet.hpp"

namespace wavescope {

namespace {

// Running mean of the samples where a metric was defined.
struct Mean {
  double sum = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> get() const { return n ? std::optional(sum / static_cast<double>(n)) : std::nullopt; }
};

std::string scale_name(std::size_t s, std::size_t levels) {
  return s == levels ? "a" : "d" + std::to_string(s + 1);
}

RowMode row_mode_for(const AttentionDump& dump, const AnalysisConfig& config) {
  return config.row_mode.value_or(dump.manifest().row_mode);
}

}  // namespace

HeadMetrics analyze_head(std::span<const AttentionDump> dumps, std::size_t layer, std::size_t head,
                         const AnalysisConfig& config, std::size_t levels) {
  const FilterBank bank = make_filter_bank(config.wavelet);
  const auto opts = config.spectrum_options();
  const auto base = config.entropy_base;

  HeadMetrics h;
  h.head_id = {layer, head};
  h.samples = dumps.size();

  Mean hs, sel, low, mid, high, hp, recon, local;
  std::vector<Mean> wav(levels + 1);
  std::vector<Mean> sens(config.alphas.size());
  std::vector<Mean> win(config.window_sizes.size());
  std::vector<EntropyPair> pairs;

  for (std::size_t s = 0; s < dumps.size(); ++s) {
    const auto& dump = dumps[s];
    const std::size_t n = dump.seq_len();
    const Series series = extract_series(dump, layer, head, row_mode_for(dump, config));

    const double h_pos = positional_entropy(series);
    if (h_pos < -1e-12 || h_pos > std::log(static_cast<double>(n)) + 1e-9) h.flags.insert(flag::kEntropyOutOfBounds);
    hp.add(in_base(h_pos, base));

    const auto spectrum = psd(series, opts);
    if (total_power(spectrum) < kDivisionFloor) {
      h.flags.insert(flag::kZeroSpectrum);
    } else {
      const double h_spec = spectral_entropy(spectrum);
      hs.add(in_base(h_spec, base));
      const auto selectivity = frequency_selectivity(spectrum);
      if (selectivity.saturated) {
        h.flags.insert(flag::kSelectivitySaturated);
      } else {
        sel.add(selectivity.value);
      }
      const auto shares = band_power(spectrum, config.bands);
      low.add(shares.low);
      mid.add(shares.mid);
      high.add(shares.high);
      pairs.push_back({h_pos, h_spec, h.head_id, dump.manifest().sequence_id});
    }

    const auto decomp = dwt(series.values, bank, levels, config.boundary);
    const auto entropy = scale_entropy(decomp, config.normalize_wavelet_entropy);
    for (std::size_t k = 0; k <= levels; ++k) {
      if (entropy.degenerate[k]) {
        h.flags.insert(std::string(flag::kDegenerateScale) + "@" + scale_name(k, levels));
      } else {
        wav[k].add(in_base(entropy.entropy_per_scale[k], base));
      }
    }

    const auto err = reconstruction_error(series.values, bank, levels, config.boundary);
    if (err.degenerate) {
      h.flags.insert(flag::kDegenerateReconstruction);
    } else {
      recon.add(err.value);
    }

    local.add(locality_ratio(dump.matrix(layer, head), n, config.locality_bandwidth));

    for (std::size_t a = 0; a < config.alphas.size(); ++a) {
      const double alpha = config.alphas[a];
      const std::string tag = "@" + format_number(alpha);
      try {
        const auto result = scale_sensitivity(series, alpha, bank, config.boundary);
        if (result.zero_norm) {
          h.flags.insert(flag::kZeroNorm + tag);
        } else {
          sens[a].add(result.sensitivity);
        }
      } catch (const Error& e) {
        if (e.code() != Errc::TooShortAfterScaling) throw;
        h.flags.insert(flag::kScaleTooShort + tag);
      }
    }

    for (std::size_t w = 0; w < config.window_sizes.size(); ++w) {
      const std::size_t size = config.window_sizes[w];
      if (size > n) {
        h.flags.insert(flag::kWindowTooLarge + ("@" + std::to_string(size)));
        continue;
      }
      const std::size_t one[] = {size};
      win[w].add(window_entropy(series, one).mean_entropy.front());
    }
  }

  h.spectral_entropy = hs.get();
  h.frequency_selectivity = sel.get();
  if (low.n) h.band_shares = BandShares{*low.get(), *mid.get(), *high.get()};
  h.positional_entropy = hp.get();
  for (const auto& m : wav) h.wavelet_entropy_per_scale.push_back(m.get());
  h.reconstruction_error = recon.get();
  h.locality_ratio = local.get();
  for (std::size_t a = 0; a < config.alphas.size(); ++a) h.scale_sens.emplace_back(config.alphas[a], sens[a].get());
  for (std::size_t w = 0; w < config.window_sizes.size(); ++w) {
    h.window_entropy.emplace_back(config.window_sizes[w], win[w].get());
  }

  if (pairs.size() < 2) {
    h.flags.insert(flag::kInsufficientSamples);
  } else {
    const auto rho = pos_spec_correlation(pairs);
    if (rho.degenerate) {
      h.flags.insert(flag::kDegenerateVariance);
    } else {
      h.rho = rho.rho;
    }
  }
  return h;
}

RunReport analyze_dumps(std::span<const AttentionDump> dumps, const AnalysisConfig& config) {
  if (dumps.empty()) throw Error(Errc::EmptyInput, "no attention dumps");
  check_config(config);
  const auto& first = dumps.front();
  std::size_t shortest = first.seq_len();
  for (const auto& d : dumps) {
    if (d.num_layers() != first.num_layers() || d.num_heads() != first.num_heads()) {
      throw Error(Errc::DimensionMismatch, "dumps disagree on layer or head count");
    }
    shortest = std::min(shortest, d.seq_len());
  }
  const FilterBank bank = make_filter_bank(config.wavelet);
  if (shortest < std::max(kMinSeriesLength, bank.length())) {
    throw Error(Errc::TooShort, "sequence length " + std::to_string(shortest) + " too short for analysis");
  }
  const std::size_t cap = max_level(shortest, bank.length());
  const std::size_t levels = config.levels.value_or(cap);
  if (cap < 1) throw Error(Errc::TooShort, "length " + std::to_string(shortest) + " admits no wavelet level");
  if (levels < 1 || levels > cap) {
    throw Error(Errc::TooManyLevels, std::to_string(levels) + " levels requested, at most " + std::to_string(cap));
  }

  std::vector<HeadMetrics> heads;
  for (std::size_t l = 0; l < first.num_layers(); ++l) {
    for (std::size_t h = 0; h < first.num_heads(); ++h) heads.push_back(analyze_head(dumps, l, h, config, levels));
  }

  RunReport run = aggregate(std::move(heads), config);
  for (const auto& d : dumps) {
    run.inputs.push_back(d.manifest());
    run.renormalized_rows += d.renormalized_rows();
  }

  const RowMode mode = row_mode_for(first, config);
  for (auto& layer : run.layers) {
    std::vector<std::vector<double>> atoms;
    for (std::size_t h = 0; h < first.num_heads(); ++h) {
      atoms.push_back(extract_series(first, layer.layer, h, mode).values);
    }
    const auto probes = random_unit_probes(first.seq_len(), config.frame_probes, derive_seed(config.seed, layer.layer));
    layer.frame_bounds = frame_bounds(atoms, probes);
  }
  return run;
}

}  // namespace wavescope
