#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "otsu_oracle.hpp"
#include "twophase/baseline.hpp"
#include "twophase/error.hpp"
#include "twophase/solver.hpp"
#include "twophase/synthetic.hpp"

using namespace twophase;

TEST_CASE("histogram") {
  const ScalarField f(4, 1, std::vector<double>{0.0, 1.0, 128.0 / 255.0, 1.0});
  const Histogram h = build_histogram(f);
  CHECK(h.total == 4);
  CHECK(h.bins[0] == 1);
  CHECK(h.bins[128] == 1);
  CHECK(h.bins[255] == 2);
  for (int level = 0; level < 256; ++level) CHECK(histogram_bin(level / 255.0) == level);
}

TEST_CASE("otsu on a half-black half-white image separates the groups") {
  ScalarField f(10, 10, 0.0);
  for (std::size_t k = 50; k < 100; ++k) f[k] = 1.0;
  const double t = otsu_threshold(f);
  CHECK(t > 0.0);
  CHECK(t < 1.0);
  CHECK(otsu_split(build_histogram(f)) == twophase::test::exhaustive_otsu(build_histogram(f).bins));
  const Mask m = otsu_segment(f);
  for (std::size_t k = 0; k < 100; ++k) CHECK(m[k] == (k >= 50 ? 1 : 0));
}

TEST_CASE("otsu on two gaussian clusters lands between them") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> lo(0.2, 0.05);
  std::normal_distribution<double> hi(0.8, 0.05);
  ScalarField f(64, 64);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::clamp(k % 2 ? hi(rng) : lo(rng), 0.0, 1.0);
  const Histogram h = build_histogram(f);
  const int k = otsu_split(h);
  CHECK(k == twophase::test::exhaustive_otsu(h.bins));

  // The clusters leave the middle bins empty, so every split in the gap has the same
  // between-class variance and the lowest one is returned. The tied plateau covers
  // [0.4, 0.6] and the threshold separates the clusters exactly.
  const double t = otsu_threshold(f);
  const Mask m = otsu_segment(f);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(m[i] == (i % 2 ? 1 : 0));
  for (int level = 102; level <= 153; ++level) CHECK(h.bins[static_cast<std::size_t>(level)] == 0);
  CHECK(t < 0.4);
  CHECK(t > 0.3);
}

TEST_CASE("otsu rejects a constant image") {
  CHECK_THROWS_AS(otsu_threshold(ScalarField(5, 5, 0.3)), DegenerateInputError);
  CHECK_THROWS_AS(otsu_segment(ScalarField(5, 5, 0.3)), DegenerateInputError);
}

TEST_CASE("otsu_segment on a binary image reproduces it") {
  std::mt19937_64 rng(2);
  ScalarField f(13, 11);
  for (double& v : f) v = (rng() & 1) ? 1.0 : 0.0;
  const Mask m = otsu_segment(f);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(m[k] == static_cast<std::uint8_t>(f[k]));
}

TEST_CASE("otsu matches the exhaustive scan on random histograms") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 100; ++t) {
    Histogram h;
    const int occupied = 2 + static_cast<int>(rng() % 60);
    for (int i = 0; i < occupied; ++i) {
      const auto bin = static_cast<std::size_t>(rng() % 256);
      const auto count = rng() % 1000;
      h.bins[bin] += count;
      h.total += count;
    }
    const int expect = twophase::test::exhaustive_otsu(h.bins);
    if (expect < 0) {
      CHECK_THROWS_AS(otsu_split(h), DegenerateInputError);
    } else {
      CHECK(otsu_split(h) == expect);
    }
  }
}

TEST_CASE("a bin-aligned intensity shift moves the threshold by the same amount") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> level(20, 200);
  ScalarField f(30, 30);
  for (double& v : f) v = level(rng) / 255.0;
  const double t0 = otsu_threshold(f);
  for (int shift : {1, 7, 40}) {
    ScalarField g = f;
    for (double& v : g) v = (std::lround(v * 255.0) + shift) / 255.0;
    CHECK(otsu_threshold(g) == doctest::Approx(t0 + shift / 255.0).epsilon(1e-12));
  }
}

TEST_CASE("otsu on the synthetic disk") {
  SUBCASE("low noise agrees with ground truth") {
    const SyntheticImage s = make_synthetic(SyntheticKind::disk, 128, 0.05, 7);
    CHECK(agreement(otsu_segment(s.image), s.truth) >= 0.99);
  }
  SUBCASE("heavy noise is worse than the regularised solver") {
    const SyntheticImage s = make_synthetic(SyntheticKind::disk, 128, 0.3, 7);
    const double otsu = agreement(otsu_segment(s.image), s.truth);
    const double breg = agreement(segment(s.image, SolverParams{}).mask, s.truth);
    MESSAGE("otsu agreement " << otsu << ", bregman agreement " << breg);
    CHECK(otsu < breg);
  }
}
