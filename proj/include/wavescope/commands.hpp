#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavescope/config.hpp"
#include "wavescope/report.hpp"
#include "wavescope/synth.hpp"

namespace wavescope {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

struct AnalyzeArgs {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> manifests;
  std::optional<std::filesystem::path> config_path;
  nlohmann::json overrides = nlohmann::json::object();  // config keys set on the command line
  std::optional<std::filesystem::path> out;              // stdout when unset
  Format format = Format::Json;
  std::optional<std::filesystem::path> profile;          // per-layer band profile CSV
};

/// Config file (if any) with the command-line keys laid over it.
AnalysisConfig resolve_config(const std::optional<std::filesystem::path>& path, const nlohmann::json& overrides);

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);

struct SynthArgs {
  SynthSpec spec;
  std::filesystem::path out;
  std::optional<std::filesystem::path> manifest_out;  // defaults to `out` with a .json extension
};

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err);

struct ReportArgs {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::string> keys;
  LabelField label = LabelField::Source;
  Format format = Format::Markdown;
  std::optional<std::filesystem::path> out;
};

std::vector<std::string> default_report_keys();

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err);

int cmd_validate(const std::filesystem::path& tensor, const std::filesystem::path& manifest, std::ostream& out,
                 std::ostream& err);

}  // namespace wavescope
