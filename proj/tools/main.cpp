#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wavescope/commands.hpp"
#include "wavescope/error.hpp"

using namespace wavescope;

namespace {

struct ConfigFlags {
  std::string bands, wavelet, boundary, windows, alphas, row_mode, base, window, pad, wavelet_entropy;
  std::optional<bool> dc_exclude;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> levels, locality_bandwidth, frame_probes;
  std::optional<int> float_digits;

  void attach(CLI::App& app) {
    app.add_option("--bands", bands, "Band edges L,M in Nyquist units");
    app.add_option("--wavelet", wavelet, "db1, db2 or db4");
    app.add_option("--boundary", boundary, "periodic or symmetric");
    app.add_option("--windows", windows, "Window sizes a,b,c");
    app.add_option("--alphas", alphas, "Scale factors a,b");
    app.add_option("--row-mode", row_mode, "rows-mean, last-row or row-index:K");
    app.add_option("--dc-exclude", dc_exclude, "Remove the mean and drop bin 0 (true/false)");
    app.add_option("--base", base, "Entropy base: nats or bits");
    app.add_option("--seed", seed, "Seed for randomized diagnostics");
    app.add_option("--levels", levels, "Wavelet decomposition levels");
    app.add_option("--window", window, "Spectral window: hann or rect");
    app.add_option("--pad", pad, "Zero padding: pow2 or none");
    app.add_option("--wavelet-entropy", wavelet_entropy, "normalized or literal");
    app.add_option("--locality-bandwidth", locality_bandwidth, "Band half-width for the locality ratio");
    app.add_option("--frame-probes", frame_probes, "Random probes for frame bounds");
    app.add_option("--float-digits", float_digits, "Significant digits in emitted numbers");
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    if (!bands.empty()) j["bands"] = parse_double_list(bands);
    if (!wavelet.empty()) j["wavelet"] = wavelet;
    if (!boundary.empty()) j["boundary"] = boundary;
    if (!windows.empty()) j["windows"] = parse_size_list(windows);
    if (!alphas.empty()) j["alphas"] = parse_double_list(alphas);
    if (!row_mode.empty()) j["row_mode"] = row_mode;
    if (dc_exclude) j["dc_exclude"] = *dc_exclude;
    if (!base.empty()) j["base"] = base;
    if (seed) j["seed"] = *seed;
    if (levels) j["levels"] = *levels;
    if (!window.empty()) j["window"] = window;
    if (!pad.empty()) j["pad"] = pad;
    if (!wavelet_entropy.empty()) j["wavelet_entropy"] = wavelet_entropy;
    if (locality_bandwidth) j["locality_bandwidth"] = *locality_bandwidth;
    if (frame_probes) j["frame_probes"] = *frame_probes;
    if (float_digits) j["float_digits"] = *float_digits;
    return j;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral and wavelet analysis of attention maps"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "Analyze attention dumps into a run report");
  std::vector<std::string> inputs, manifests;
  std::string config_path, out_path, format = "json", profile;
  ConfigFlags flags;
  analyze->add_option("--input", inputs, "NPY tensor (repeat for more samples)")->required();
  analyze->add_option("--manifest", manifests, "Manifest JSON, one per --input")->required();
  analyze->add_option("--config", config_path, "Config JSON in the report provenance format");
  analyze->add_option("--out", out_path, "Report path (stdout when omitted)");
  analyze->add_option("--format", format, "json, csv or md");
  analyze->add_option("--profile", profile, "Write the per-layer band profile CSV here");
  flags.attach(*analyze);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic attention dump");
  SynthArgs synth_args;
  std::string kind = "uniform", dtype = "f64", manifest_out;
  std::optional<double> theta;
  synth->add_option("--kind", kind, "rope, sine, local, global, uniform, onehot or bump");
  synth->add_option("--layers", synth_args.spec.layers);
  synth->add_option("--heads", synth_args.spec.heads);
  synth->add_option("--seq-len", synth_args.spec.seq_len);
  synth->add_option("--seed", synth_args.spec.seed);
  synth->add_option("--freq", synth_args.spec.freq_norm, "sine frequency in Nyquist units");
  synth->add_option("--bandwidth", synth_args.spec.bandwidth, "local band half-width");
  synth->add_option("--width", synth_args.spec.width, "bump width in tokens");
  synth->add_option("--head-dim", synth_args.spec.head_dim);
  synth->add_option("--theta", theta, "single rope angle per token");
  synth->add_option("--theta-base", synth_args.spec.theta_base);
  synth->add_option("--logit-scale", synth_args.spec.logit_scale);
  synth->add_flag("--causal", synth_args.spec.causal);
  synth->add_option("--model-name", synth_args.spec.model_name);
  synth->add_option("--dtype", dtype, "f32 or f64");
  synth->add_option("--out", synth_args.out, "NPY output path")->required();
  synth->add_option("--manifest-out", manifest_out, "Manifest path (default: --out with .json)");

  auto* report = app.add_subcommand("report", "Compare run reports");
  ReportArgs report_args;
  std::vector<std::string> report_inputs;
  std::string keys, label = "source", report_format = "md", report_out;
  report->add_option("--input", report_inputs, "Run report JSON (repeatable)");
  report->add_option("--keys", keys, "Comma-separated metric keys");
  report->add_option("--label", label, "Row label: source or model");
  report->add_option("--format", report_format, "json, csv or md");
  report->add_option("--out", report_out, "Output path (stdout when omitted)");

  auto* validate = app.add_subcommand("validate", "Check a dump without analyzing it");
  std::string v_input, v_manifest;
  validate->add_option("--input", v_input)->required();
  validate->add_option("--manifest", v_manifest)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*analyze) {
      AnalyzeArgs args;
      args.inputs.assign(inputs.begin(), inputs.end());
      args.manifests.assign(manifests.begin(), manifests.end());
      if (!config_path.empty()) args.config_path = config_path;
      if (!out_path.empty()) args.out = out_path;
      if (!profile.empty()) args.profile = profile;
      args.format = parse_format(format);
      args.overrides = flags.to_json();
      return cmd_analyze(args, std::cout, std::cerr);
    }
    if (*synth) {
      synth_args.spec.kind = parse_synth_kind(kind);
      if (dtype != "f32" && dtype != "f64") throw Error(Errc::InvalidSpec, "dtype must be f32 or f64");
      synth_args.spec.dtype = parse_dtype(dtype);
      synth_args.spec.theta = theta;
      if (!manifest_out.empty()) synth_args.manifest_out = manifest_out;
      return cmd_synth(synth_args, std::cout, std::cerr);
    }
    if (*report) {
      report_args.inputs.assign(report_inputs.begin(), report_inputs.end());
      if (!keys.empty()) {
        std::stringstream ss(keys);
        for (std::string k; std::getline(ss, k, ',');) report_args.keys.push_back(k);
      }
      if (label != "source" && label != "model") throw Error(Errc::InvalidConfig, "label must be source or model");
      report_args.label = label == "model" ? LabelField::Model : LabelField::Source;
      report_args.format = parse_format(report_format);
      if (!report_out.empty()) report_args.out = report_out;
      return cmd_report(report_args, std::cout, std::cerr);
    }
    return cmd_validate(v_input, v_manifest, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_io_error(e.code()) ? kExitIo : kExitInvalid;
  }
}
