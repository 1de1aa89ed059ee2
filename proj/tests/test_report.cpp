#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "wavescope/error.hpp"
#include "wavescope/report.hpp"
#include "wavescope/synth.hpp"

using namespace wavescope;

namespace {

const std::filesystem::path kFixtures = WAVESCOPE_TEST_DATA "/fixtures";
const std::filesystem::path kGolden = WAVESCOPE_TEST_DATA "/golden";

HeadMetrics head(std::size_t layer, std::size_t h, double entropy, BandShares shares = {0.7, 0.2, 0.1}) {
  HeadMetrics m;
  m.head_id = {layer, h};
  m.samples = 1;
  m.spectral_entropy = entropy;
  m.frequency_selectivity = entropy / 10.0;
  m.band_shares = shares;
  m.positional_entropy = 2.0;
  m.reconstruction_error = 1e-16;
  m.locality_ratio = 0.5;
  m.scale_sens = {{0.5, 0.01}, {0.25, 0.02}};
  m.window_entropy = {{16, 0.9}};
  m.wavelet_entropy_per_scale = {1.0, 0.5};
  m.rho = -0.5;
  return m;
}

std::vector<RunReport> table6_reports() {
  std::vector<RunReport> out;
  for (const char* step : {"143000", "0", "1000", "5000", "128", "10000", "512"}) {
    out.push_back(read_run_report(kFixtures / ("pythia-6.9b-step" + std::string(step) + ".json")));
  }
  return out;
}

}  // namespace

TEST_CASE("distribution statistics") {
  const std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
  const auto s = describe(v);
  CHECK(s.mean == 2.5);
  CHECK(s.std == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.q1 == doctest::Approx(1.75));
  CHECK(s.q3 == doctest::Approx(3.25));
  CHECK(s.iqr == doctest::Approx(1.5));

  const auto one = describe(std::vector<double>{7.0});
  CHECK(one.std == 0.0);
  CHECK(one.iqr == 0.0);
  const auto flat = describe(std::vector<double>(5, 0.3));
  CHECK(flat.std == 0.0);
  CHECK(flat.iqr == 0.0);
  try {
    describe(std::vector<double>{});
    FAIL("expected AllFlagged");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AllFlagged);
  }
}

TEST_CASE("locality ratio") {
  const std::size_t n = 16;
  std::vector<double> eye(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) eye[i * n + i] = 1.0;
  CHECK(locality_ratio(eye, n, 0) == 1.0);
  const std::vector<double> uniform(n * n, 1.0 / n);
  CHECK(locality_ratio(uniform, n, 0) == doctest::Approx(1.0 / 16.0));
  CHECK_THROWS_AS(locality_ratio(uniform, n, 16), Error);

  SynthSpec spec;
  spec.kind = SynthKind::Local;
  spec.seq_len = 24;
  spec.bandwidth = 2;
  const auto banded = generate_head(spec, 0, 0);
  CHECK(locality_ratio(banded, 24, 2) == doctest::Approx(1.0));
  CHECK(locality_ratio(banded, 24, 0) == doctest::Approx(oracle::band_mass(banded, 24, 0)).epsilon(1e-12));
}

TEST_CASE("aggregation excludes flagged heads per metric") {
  std::vector<HeadMetrics> heads = {head(0, 0, 1.0), head(0, 1, 2.0), head(1, 0, 3.0), head(1, 1, 4.0)};
  heads[3].spectral_entropy.reset();
  heads[3].flags.insert(flag::kZeroSpectrum);
  const auto run = aggregate(heads, {});
  const auto& se = run.model.at("spectral_entropy");
  CHECK(se.count == 3);
  CHECK(se.excluded == 1);
  CHECK(se.mean == doctest::Approx(2.0));
  CHECK(run.model.at("positional_entropy").count == 4);
  CHECK(run.layers.size() == 2);
  CHECK(run.layers[1].metrics.at("spectral_entropy").mean == 3.0);
  CHECK(run.model_layer_mean.at("spectral_entropy").value() == doctest::Approx(2.25));
  CHECK(run.rho_model.value() == doctest::Approx(-0.5));
}

TEST_CASE("aggregation is invariant to head order") {
  std::vector<HeadMetrics> heads;
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (std::size_t l = 0; l < 3; ++l) {
    for (std::size_t h = 0; h < 5; ++h) heads.push_back(head(l, h, u(gen)));
  }
  const auto a = render_json(aggregate(heads, {}));
  std::shuffle(heads.begin(), heads.end(), gen);
  CHECK(render_json(aggregate(heads, {})) == a);
}

TEST_CASE("layer frequency profile") {
  std::vector<HeadMetrics> heads = {head(0, 0, 1.0), head(0, 1, 1.0), head(1, 0, 1.0, {0.1, 0.2, 0.7})};
  heads.push_back(head(2, 0, 1.0));
  heads.back().band_shares.reset();
  auto run = aggregate(heads, {});
  run.inputs.push_back(support::manifest_for(support::uniform_tensor(3, 2, 8)));
  const auto rows = layer_frequency_profile(run);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].shares->low == doctest::Approx(0.7));
  CHECK(rows[1].shares->high == doctest::Approx(0.7));
  CHECK_FALSE(rows[2].shares.has_value());
  const auto csv = render_layer_profile(rows, 6);
  CHECK(csv.find("2,1,,,\r\n") != std::string::npos);
}

TEST_CASE("natural ordering of sources") {
  CHECK(natural_less("step2", "step10"));
  CHECK_FALSE(natural_less("step10", "step2"));
  CHECK(natural_less("512", "1000"));
  CHECK(natural_less("a", "b"));
  CHECK(natural_less("007", "7x"));
}

TEST_CASE("checkpoint table matches the golden file") {
  const auto reports = table6_reports();
  const auto keys = std::vector<std::string>{"spectral_entropy", "frequency_selectivity", "low_freq_power_pct",
                                             "scale_sens@0.5", "scale_sens@0.25"};
  const auto table = compare_runs(reports, keys);
  CHECK(table.warnings.empty());
  CHECK(table.rows.front().source == "0");
  CHECK(table.rows.back().source == "143000");
  const auto md = render(table, Format::Markdown);
  CHECK(md.find("| 1000 | 3.522 | 0.230 | 43.4 | 0.617 | 0.633 |\n") != std::string::npos);
  CHECK(md == support::slurp(kGolden / "table6.md"));
}

TEST_CASE("model-labelled table row") {
  const std::vector<RunReport> reports = {read_run_report(kFixtures / "pythia-12b.json")};
  const auto keys =
      std::vector<std::string>{"heads", "scale_sens@0.5", "scale_sens@0.25", "rho", "reconstruction_error"};
  const auto md = render(compare_runs(reports, keys, LabelField::Model), Format::Markdown);
  CHECK(md.find("| model |") == 0);
  CHECK(md.find("| Pythia (12B) | 40 | 0.059 | 0.099 | -0.490 | 1.26e-07 |\n") != std::string::npos);
}

TEST_CASE("identical reports give identical rows and mixed configs warn") {
  auto reports = std::vector<RunReport>{read_run_report(kFixtures / "pythia-12b.json"),
                                        read_run_report(kFixtures / "pythia-12b.json")};
  const std::vector<std::string> keys = {"scale_sens@0.5", "missing_metric"};
  auto table = compare_runs(reports, keys);
  CHECK(table.rows[0].values == table.rows[1].values);
  CHECK(format_cell("missing_metric", table.rows[0].values[1]) == "-");
  reports[1].config.wavelet = "db4";
  table = compare_runs(reports, keys);
  CHECK(table.warnings.size() == 1);
  CHECK_THROWS_AS(compare_runs(std::vector<RunReport>{}, keys), Error);
}

TEST_CASE("cell formats") {
  CHECK(format_cell("heads", 40.0) == "40");
  CHECK(format_cell("band_mid_pct", 21.04) == "21.0");
  CHECK(format_cell("reconstruction_error", 1.26e-07) == "1.26e-07");
  CHECK(format_cell("rho", -0.4904) == "-0.490");
  CHECK(format_cell("rho", std::nullopt) == "-");
}

TEST_CASE("JSON emit, parse, emit is byte-stable") {
  std::vector<HeadMetrics> heads = {head(0, 0, 1.0 / 3.0), head(0, 1, 2.0 / 7.0)};
  heads[1].flags.insert(flag::kInsufficientSamples);
  heads[1].rho.reset();
  auto run = aggregate(heads, {});
  run.inputs.push_back(support::manifest_for(support::uniform_tensor(1, 2, 8)));
  run.layers[0].frame_bounds = FrameBounds{0.1234567891, 2.0};
  const auto first = render_json(run);
  CHECK(first.find("\"provenance\"") != std::string::npos);
  CHECK(first.find("0.333333") != std::string::npos);
  const auto second = render_json(parse_run_report(first));
  CHECK(second == first);
  CHECK(render_json(parse_run_report(second)) == first);

  for (const char* name : {"pythia-12b.json", "pythia-6.9b-step1000.json"}) {
    const auto text = support::slurp(kFixtures / name);
    const auto once = render_json(parse_run_report(text));
    CHECK(render_json(parse_run_report(once)) == once);
  }
}

TEST_CASE("CSV quoting and emit determinism") {
  std::vector<HeadMetrics> heads = {head(0, 0, 1.0)};
  heads[0].flags = {"a", "b"};
  auto run = aggregate(heads, {});
  const auto csv = render_csv(run);
  CHECK(csv.rfind("layer,head,samples,spectral_entropy", 0) == 0);
  CHECK(csv.find(",a;b\r\n") != std::string::npos);

  ComparisonTable t;
  t.keys = {"x"};
  t.rows.push_back({"say \"hi\", twice", "s", {1.5}});
  CHECK(render(t, Format::Csv) == "source,x\r\n\"say \"\"hi\"\", twice\",1.5\r\n");

  support::TempDir dir("emit");
  emit(run, Format::Json, dir / "a.json");
  emit(run, Format::Json, dir / "b.json");
  CHECK(support::slurp(dir / "a.json") == support::slurp(dir / "b.json"));
  CHECK_THROWS_AS(emit(run, Format::Json, dir / "missing" / "c.json"), Error);
  CHECK(parse_format("md") == Format::Markdown);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}
