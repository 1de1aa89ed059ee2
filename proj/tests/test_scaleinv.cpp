#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wavescope/error.hpp"
#include "wavescope/scaleinv.hpp"
#include "wavescope/synth.hpp"

using namespace wavescope;

TEST_CASE("subsample indices") {
  CHECK(subsample_indices(16, 0.5) == std::vector<std::size_t>{0, 2, 4, 6, 9, 11, 13, 15});
  CHECK(subsample_indices(10, 1.0).size() == 10);
  CHECK(subsample_indices(80, 0.1).size() == 8);
  try {
    subsample_indices(16, 0.25);
    FAIL("expected TooShortAfterScaling");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooShortAfterScaling);
  }
  CHECK_THROWS_AS(subsample_indices(16, 1.5), Error);
}

TEST_CASE("linear resampling") {
  const std::vector<double> v = {0.0, 1.0, 2.0};
  CHECK(resample_linear(v, 5) == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(resample_linear(v, 3) == v);
}

TEST_CASE("cosine similarity") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  CHECK(cosine_similarity(a, a) == 1.0);
  const std::vector<double> b = {-3.0, 0.0, 1.0};
  CHECK(cosine_similarity(a, b) == doctest::Approx(0.0));
  bool zero = false;
  const std::vector<double> z = {0.0, 0.0, 0.0};
  CHECK(cosine_similarity(a, z, &zero) == 0.0);
  CHECK(zero);
}

TEST_CASE("scale sensitivity is zero at full scale") {
  std::mt19937_64 gen(7);
  for (std::size_t n : {16u, 64u, 100u}) {
    const auto s = normalized_series(oracle::random_series(gen, n, true));
    CHECK(scale_sensitivity(s, 1.0, make_filter_bank("db2")).sensitivity == 0.0);
  }
}

TEST_CASE("scale sensitivity stays within [0, 2] and grows with coarser scaling for a bump") {
  const auto bump = gaussian_bump(128, 60.0, 8.0);
  const auto bank = make_filter_bank("db2");
  const double half = scale_sensitivity(bump, 0.5, bank).sensitivity;
  const double quarter = scale_sensitivity(bump, 0.25, bank).sensitivity;
  CHECK(half >= 0.0);
  CHECK(quarter <= 2.0);
  CHECK(quarter >= half);
}

TEST_CASE("window entropy") {
  const auto u = normalized_series(std::vector<double>(32, 1.0));
  const std::vector<std::size_t> sizes = {4, 8, 32};
  const auto prof = window_entropy(u, sizes);
  for (double h : prof.mean_entropy) CHECK(h == doctest::Approx(1.0));

  std::vector<double> spikes(32, 0.0);
  for (std::size_t i = 0; i < 32; i += 8) spikes[i] = 1.0;
  const auto ps = window_entropy(normalized_series(spikes), std::vector<std::size_t>{4});
  CHECK(ps.mean_entropy[0] == 0.0);

  const std::vector<std::size_t> too_big = {64};
  try {
    window_entropy(u, too_big);
    FAIL("expected WindowTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WindowTooLarge);
  }
}

TEST_CASE("window entropy matches a direct sum and ignores global scale") {
  std::mt19937_64 gen(11);
  const auto raw = oracle::random_series(gen, 96, true);
  const std::vector<std::size_t> sizes = {8, 16, 32};
  const auto prof = window_entropy(normalized_series(raw), sizes);
  std::vector<double> scaled = raw;
  for (double& v : scaled) v *= 37.5;
  const auto again = window_entropy(normalized_series(scaled), sizes);
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::size_t w = sizes[k];
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t start = 0; start + w <= raw.size(); start += w / 2) {
      std::vector<double> window(raw.begin() + static_cast<std::ptrdiff_t>(start),
                                 raw.begin() + static_cast<std::ptrdiff_t>(start + w));
      sum += oracle::entropy(oracle::to_distribution(window)) / std::log(static_cast<double>(w));
      ++count;
    }
    CHECK(prof.mean_entropy[k] == doctest::Approx(sum / static_cast<double>(count)).epsilon(1e-12));
    CHECK(again.mean_entropy[k] == doctest::Approx(prof.mean_entropy[k]).epsilon(1e-12));
  }
}

TEST_CASE("alternating series are more scale sensitive than smooth ones") {
  const std::size_t n = 128;
  std::vector<double> alternating(n), smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    alternating[i] = i % 2 ? 0.2 : 1.0;
    smooth[i] = 1.0 + std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  const auto bank = make_filter_bank("db2");
  const auto hf = normalized_series(alternating);
  const auto lf = normalized_series(smooth);
  const double s_hf = scale_sensitivity(hf, 0.5, bank).sensitivity;
  const double s_lf = scale_sensitivity(lf, 0.5, bank).sensitivity;
  CHECK(s_hf > s_lf);
  CHECK(scale_sensitivity(lf, 0.25, bank).sensitivity >= s_lf);
}
