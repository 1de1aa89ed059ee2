#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wavescope/error.hpp"
#include "wavescope/uncertainty.hpp"

using namespace wavescope;

TEST_CASE("positional entropy extremes") {
  for (std::size_t n : {8u, 16u, 100u}) {
    const auto u = normalized_series(std::vector<double>(n, 1.0));
    CHECK(std::abs(positional_entropy(u) - std::log(static_cast<double>(n))) < 1e-12);
    std::vector<double> hot(n, 0.0);
    hot[n / 2] = 1.0;
    CHECK(positional_entropy(normalized_series(hot)) == 0.0);
  }
  std::mt19937_64 gen(6);
  const auto p = oracle::to_distribution(oracle::random_series(gen, 40, true));
  CHECK(positional_entropy(normalized_series(p)) == doctest::Approx(oracle::entropy(p)).epsilon(1e-12));
}

TEST_CASE("positional entropy needs a distribution") {
  Series s{{0.5, 0.6, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, true};
  try {
    positional_entropy(s);
    FAIL("expected NotNormalized");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotNormalized);
  }
}

TEST_CASE("spectral entropy") {
  CHECK(spectral_entropy(spectrum_from_power({0.0, 0.0, 2.0, 0.0, 0.0})) == 0.0);
  const auto flat = spectrum_from_power({9.0, 1.0, 1.0, 1.0, 1.0}, true);
  CHECK(spectral_entropy(flat) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(spectral_entropy(spectrum_from_power({1.0, 0.0, 0.0}, true)), Error);
}

TEST_CASE("correlation matches the moment-sum oracle") {
  std::mt19937_64 gen(21);
  std::vector<EntropyPair> pairs;
  std::vector<double> xs, ys;
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int i = 0; i < 50; ++i) {
    const double x = 1.0 + 0.05 * i;
    const double y = 4.0 - x + noise(gen);
    pairs.push_back({x, y, {0, 0}, std::to_string(i)});
    xs.push_back(x);
    ys.push_back(y);
  }
  const auto r = pos_spec_correlation(pairs);
  CHECK(r.rho == doctest::Approx(oracle::pearson(xs, ys)).epsilon(1e-12));
  CHECK(r.rho < 0.0);
  CHECK(r.n_samples == 50);
}

TEST_CASE("perfect and degenerate correlations") {
  std::vector<EntropyPair> line;
  for (int i = 0; i < 5; ++i) line.push_back({double(i), 10.0 - 2.0 * i, {}, ""});
  CHECK(pos_spec_correlation(line).rho == doctest::Approx(-1.0));

  std::vector<EntropyPair> flat;
  for (int i = 0; i < 5; ++i) flat.push_back({1.0, double(i), {}, ""});
  const auto d = pos_spec_correlation(flat);
  CHECK(d.degenerate);
  CHECK(d.rho == 0.0);

  try {
    pos_spec_correlation(std::vector<EntropyPair>(1));
    FAIL("expected InsufficientSamples");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientSamples);
  }
}

TEST_CASE("correlation aggregation skips degenerate heads") {
  std::vector<CorrelationResult> heads = {{-0.4, 10, CorrelationScope::Head, false},
                                          {-0.6, 10, CorrelationScope::Head, false},
                                          {0.0, 10, CorrelationScope::Head, true}};
  const auto layer = aggregate_correlation(heads, CorrelationScope::Layer);
  CHECK(layer.rho == doctest::Approx(-0.5));
  CHECK(layer.n_samples == 2);
  const std::vector<CorrelationResult> layers = {layer, {-0.1, 1, CorrelationScope::Layer, false}};
  CHECK(aggregate_correlation(layers, CorrelationScope::Model).rho == doctest::Approx(-0.3));
  CHECK_THROWS_AS(aggregate_correlation(std::vector<CorrelationResult>{}, CorrelationScope::Layer), Error);
}
