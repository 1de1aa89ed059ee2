#include "wavescope/commands.hpp"

#include "wavescope/error.hpp"
#include "wavescope/pipeline.hpp"

namespace wavescope {

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_io_error(e.code()) ? kExitIo : kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

void deliver(const std::string& text, const std::optional<std::filesystem::path>& path, std::ostream& out) {
  if (path) {
    write_text(*path, text);
  } else {
    out << text;
  }
}

}  // namespace

AnalysisConfig resolve_config(const std::optional<std::filesystem::path>& path, const nlohmann::json& overrides) {
  AnalysisConfig config = path ? read_config(*path) : AnalysisConfig{};
  config = config_from_json(overrides, config);
  check_config(config);
  return config;
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.inputs.empty()) throw Error(Errc::EmptyInput, "no --input given");
    if (args.inputs.size() != args.manifests.size()) {
      throw Error(Errc::InvalidConfig, "each --input needs a matching --manifest");
    }
    const AnalysisConfig config = resolve_config(args.config_path, args.overrides);
    std::vector<AttentionDump> dumps;
    for (std::size_t i = 0; i < args.inputs.size(); ++i) dumps.push_back(load_dump(args.inputs[i], args.manifests[i]));
    const RunReport run = analyze_dumps(dumps, config);

    deliver(render(run, args.format), args.out, out);
    if (args.profile) write_text(*args.profile, render_layer_profile(layer_frequency_profile(run), config.float_digits));

    std::size_t flags = 0, flagged = 0;
    for (const auto& h : run.heads) {
      flags += h.flags.size();
      if (!h.flags.empty()) ++flagged;
    }
    auto& summary = args.out ? out : err;
    summary << "analyzed " << run.heads.size() << " heads over " << dumps.size() << " sample(s); " << flags
            << " flags raised on " << flagged << " heads\n";
    return kExitOk;
  });
}

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const AttentionDump dump = generate(args.spec);
    auto manifest_path = args.manifest_out.value_or(std::filesystem::path(args.out).replace_extension(".json"));
    write_npy(args.out, dump.weights(), args.spec.dtype);
    write_manifest(manifest_path, dump.manifest());
    out << "wrote " << args.out.string() << " and " << manifest_path.string() << "\n";
    return kExitOk;
  });
}

std::vector<std::string> default_report_keys() {
  return {"spectral_entropy", "frequency_selectivity", "low_freq_power_pct", "scale_sens@0.5", "scale_sens@0.25"};
}

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.inputs.empty()) throw Error(Errc::EmptyInput, "no reports given");
    std::vector<RunReport> reports;
    for (const auto& p : args.inputs) reports.push_back(read_run_report(p));
    const auto keys = args.keys.empty() ? default_report_keys() : args.keys;
    const auto table = compare_runs(reports, keys, args.label);
    for (const auto& w : table.warnings) err << "warning: " << w << "\n";
    deliver(render(table, args.format), args.out, out);
    return kExitOk;
  });
}

int cmd_validate(const std::filesystem::path& tensor, const std::filesystem::path& manifest_path, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const Tensor4 weights = read_npy(tensor);
    const Manifest manifest = read_manifest(manifest_path);
    check_manifest(manifest, weights.shape);
    if (manifest.dtype != weights.source_dtype) {
      throw Error(Errc::ManifestMismatch, "manifest dtype " + to_string(manifest.dtype) + " but tensor stores " +
                                              to_string(weights.source_dtype));
    }
    const auto violations = find_violations(weights);
    for (const auto& v : violations) out << v.describe() << "\n";
    out << violations.size() << " violations\n";
    return violations.empty() ? kExitOk : kExitInvalid;
  });
}

}  // namespace wavescope
