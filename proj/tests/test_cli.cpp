#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "support.hpp"
#include "wavescope/commands.hpp"
#include "wavescope/error.hpp"
#include "wavescope/pipeline.hpp"
#include "wavescope/synth.hpp"

using namespace wavescope;

namespace {

struct Captured {
  int code;
  std::string out, err;
};

template <class F>
Captured capture(F&& fn) {
  std::ostringstream out, err;
  const int code = fn(out, err);
  return {code, out.str(), err.str()};
}

void write_dump(const support::TempDir& dir, const std::string& stem, const Tensor4& t) {
  write_npy(dir / (stem + ".npy"), t, Dtype::f64);
  write_manifest(dir / (stem + ".json"), support::manifest_for(t));
}

AnalyzeArgs analyze_args(const support::TempDir& dir, const std::string& stem) {
  AnalyzeArgs a;
  a.inputs = {dir / (stem + ".npy")};
  a.manifests = {dir / (stem + ".json")};
  a.out = dir / (stem + ".report.json");
  return a;
}

}  // namespace

TEST_CASE("uniform dump: maximal positional entropy and zero spectra") {
  SynthSpec spec;
  spec.kind = SynthKind::Uniform;
  spec.heads = 2;
  spec.seq_len = 16;
  const std::vector<AttentionDump> dumps = {generate(spec)};
  const auto run = analyze_dumps(dumps, {});
  for (const auto& h : run.heads) {
    CHECK(std::abs(*h.positional_entropy - std::log(16.0)) < 1e-12);
    CHECK(h.flags.count(flag::kZeroSpectrum) == 1);
    CHECK_FALSE(h.spectral_entropy.has_value());
    CHECK(h.flags.count("window_too_large@32") == 1);
  }
  CHECK(run.model.at("spectral_entropy").count == 0);
  CHECK(run.model.at("spectral_entropy").excluded == 2);
}

TEST_CASE("sine at half Nyquist is mid-band dominant") {
  SynthSpec spec;
  spec.kind = SynthKind::Sine;
  spec.freq_norm = 0.5;
  spec.heads = 3;
  spec.seq_len = 64;
  const std::vector<AttentionDump> dumps = {generate(spec)};
  const auto run = analyze_dumps(dumps, {});
  for (const auto& h : run.heads) {
    REQUIRE(h.band_shares);
    CHECK(h.band_shares->mid > 0.99);
    CHECK(h.band_shares->low + h.band_shares->mid + h.band_shares->high == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("layers with low and high sines separate in the profile") {
  SynthSpec low, high;
  low.kind = high.kind = SynthKind::Sine;
  low.seq_len = high.seq_len = 64;
  low.heads = high.heads = 2;
  low.freq_norm = 0.05;
  high.freq_norm = 0.9;
  const auto a = generate(low), b = generate(high);
  Tensor4 t;
  t.shape = {2, 2, 64, 64};
  t.data = a.weights().data;
  t.data.insert(t.data.end(), b.weights().data.begin(), b.weights().data.end());
  const std::vector<AttentionDump> dumps = {make_dump(support::manifest_for(t), t)};
  auto run = analyze_dumps(dumps, {});
  const auto rows = layer_frequency_profile(run);
  CHECK(rows[0].shares->low > 0.9);
  CHECK(rows[1].shares->high > 0.9);
}

TEST_CASE("samples across dumps give a per-head correlation") {
  std::vector<AttentionDump> dumps;
  for (std::uint64_t s = 0; s < 6; ++s) {
    SynthSpec spec;
    spec.kind = SynthKind::Bump;
    spec.heads = 2;
    spec.seq_len = 64;
    spec.seed = s;
    spec.width = 1.0 + 2.0 * static_cast<double>(s);
    dumps.push_back(generate(spec));
  }
  const auto run = analyze_dumps(dumps, {});
  for (const auto& h : run.heads) {
    CHECK(h.samples == 6);
    REQUIRE(h.rho.has_value());
    CHECK(*h.rho < 0.0);
  }
  REQUIRE(run.rho_model.has_value());
  REQUIRE(run.layers[0].frame_bounds.has_value());
  CHECK(run.layers[0].frame_bounds->lower <= run.layers[0].frame_bounds->upper);
}

TEST_CASE("analyze writes a report and summary") {
  support::TempDir dir("analyze");
  SynthSpec spec;
  spec.kind = SynthKind::Local;
  spec.heads = 2;
  spec.seq_len = 32;
  const auto dump = generate(spec);
  write_dump(dir, "local", dump.weights());
  auto args = analyze_args(dir, "local");
  args.profile = dir / "profile.csv";
  const auto r = capture([&](auto& o, auto& e) { return cmd_analyze(args, o, e); });
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("analyzed 2 heads") == 0);
  const auto report = read_run_report(*args.out);
  CHECK(report.heads.size() == 2);
  CHECK(support::slurp(dir / "profile.csv").rfind("layer,heads,low,mid,high\r\n", 0) == 0);
}

TEST_CASE("analyze exit codes") {
  support::TempDir dir("codes");
  support::spit(dir / "bad.npy", "not an npy file at all");
  write_manifest(dir / "bad.json", support::manifest_for(support::uniform_tensor(1, 1, 16)));
  auto r = capture([&](auto& o, auto& e) { return cmd_analyze(analyze_args(dir, "bad"), o, e); });
  CHECK(r.code == kExitIo);
  CHECK(r.err.find("BadMagic") != std::string::npos);

  auto t = support::uniform_tensor(1, 1, 16);
  t.at(0, 0, 0, 0) = std::numeric_limits<double>::quiet_NaN();
  write_dump(dir, "nan", t);
  r = capture([&](auto& o, auto& e) { return cmd_analyze(analyze_args(dir, "nan"), o, e); });
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("NonFiniteWeight") != std::string::npos);

  write_dump(dir, "ok", support::uniform_tensor(1, 1, 16));
  auto args = analyze_args(dir, "ok");
  args.overrides = {{"wavelet", "haar"}};
  r = capture([&](auto& o, auto& e) { return cmd_analyze(args, o, e); });
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("UnknownWavelet") != std::string::npos);

  args.overrides = nlohmann::json::object();
  args.inputs.push_back(dir / "missing.npy");
  args.manifests.push_back(dir / "ok.json");
  r = capture([&](auto& o, auto& e) { return cmd_analyze(args, o, e); });
  CHECK(r.code == kExitIo);
}

TEST_CASE("flags override the config file and the report replays") {
  support::TempDir dir("config");
  SynthSpec spec;
  spec.kind = SynthKind::Bump;
  spec.seq_len = 64;
  write_dump(dir, "bump", generate(spec).weights());
  support::spit(dir / "cfg.json", R"({"wavelet": "db4", "base": "bits", "windows": [8, 16]})");

  auto args = analyze_args(dir, "bump");
  args.config_path = dir / "cfg.json";
  args.overrides = {{"wavelet", "db1"}};
  REQUIRE(capture([&](auto& o, auto& e) { return cmd_analyze(args, o, e); }).code == kExitOk);
  const auto first = read_run_report(*args.out);
  CHECK(first.config.wavelet == "db1");
  CHECK(first.config.entropy_base == EntropyBase::Bits);
  CHECK(first.config.window_sizes == std::vector<std::size_t>{8, 16});

  write_text(dir / "replay.json", config_to_json(first.config).dump(2));
  auto replay = analyze_args(dir, "bump");
  replay.config_path = dir / "replay.json";
  replay.out = dir / "replay.report.json";
  REQUIRE(capture([&](auto& o, auto& e) { return cmd_analyze(replay, o, e); }).code == kExitOk);
  CHECK(support::slurp(*replay.out) == support::slurp(*args.out));

  support::spit(dir / "unknown.json", R"({"wavelets": "db4"})");
  args.config_path = dir / "unknown.json";
  CHECK(capture([&](auto& o, auto& e) { return cmd_analyze(args, o, e); }).code == kExitInvalid);
}

TEST_CASE("synth command") {
  support::TempDir dir("synth");
  SynthArgs args;
  args.spec.kind = SynthKind::Uniform;
  args.spec.heads = 2;
  args.spec.seq_len = 16;
  args.spec.seed = 7;
  args.out = dir / "u.npy";
  CHECK(capture([&](auto& o, auto& e) { return cmd_synth(args, o, e); }).code == kExitOk);
  const auto first = support::slurp(dir / "u.npy");
  const auto dump = load_dump(dir / "u.npy", dir / "u.json");
  CHECK(dump.weights().shape == std::array<std::size_t, 4>{1, 2, 16, 16});
  CHECK(capture([&](auto& o, auto& e) { return cmd_synth(args, o, e); }).code == kExitOk);
  CHECK(support::slurp(dir / "u.npy") == first);

  args.spec.seq_len = 3;
  const auto r = capture([&](auto& o, auto& e) { return cmd_synth(args, o, e); });
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("InvalidSpec") != std::string::npos);
}

TEST_CASE("validate command") {
  support::TempDir dir("validate");
  write_dump(dir, "clean", support::uniform_tensor(1, 2, 8));
  auto r = capture([&](auto& o, auto& e) { return cmd_validate(dir / "clean.npy", dir / "clean.json", o, e); });
  CHECK(r.code == kExitOk);
  CHECK(r.out == "0 violations\n");

  auto off = support::uniform_tensor(1, 1, 8);
  off.at(0, 0, 2, 0) += 0.01;
  off.at(0, 0, 5, 3) += 0.01;
  write_dump(dir, "off", off);
  r = capture([&](auto& o, auto& e) { return cmd_validate(dir / "off.npy", dir / "off.json", o, e); });
  CHECK(r.code == kExitInvalid);
  CHECK(r.out.find("row 2") != std::string::npos);
  CHECK(r.out.find("row 5") != std::string::npos);
  CHECK(r.out.find("2 violations") != std::string::npos);

  auto nan = support::uniform_tensor(1, 1, 8);
  nan.at(0, 0, 1, 1) = std::numeric_limits<double>::quiet_NaN();
  write_dump(dir, "nan", nan);
  r = capture([&](auto& o, auto& e) { return cmd_validate(dir / "nan.npy", dir / "nan.json", o, e); });
  CHECK(r.code == kExitInvalid);
  CHECK(r.out.find("NonFiniteWeight") != std::string::npos);
}

TEST_CASE("report command") {
  support::TempDir dir("report");
  const std::filesystem::path fixtures = WAVESCOPE_TEST_DATA "/fixtures";
  ReportArgs args;
  args.inputs = {fixtures / "pythia-6.9b-step5000.json", fixtures / "pythia-6.9b-step1000.json"};
  auto r = capture([&](auto& o, auto& e) { return cmd_report(args, o, e); });
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("| 1000 |") < r.out.find("| 5000 |"));
  CHECK(r.err.empty());

  auto mixed = parse_run_report(support::slurp(fixtures / "pythia-6.9b-step1000.json"));
  mixed.config.boundary = BoundaryMode::Symmetric;
  write_text(dir / "mixed.json", render_json(mixed));
  args.inputs.push_back(dir / "mixed.json");
  r = capture([&](auto& o, auto& e) { return cmd_report(args, o, e); });
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("warning: provenance") == 0);

  args.inputs.clear();
  r = capture([&](auto& o, auto& e) { return cmd_report(args, o, e); });
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("EmptyInput") != std::string::npos);
}
