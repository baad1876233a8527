#include <cmath>
#include <random>

#include "doctest.h"
#include "kslab/lorentz.hpp"
#include "kslab/norms.hpp"
#include "kslab/params.hpp"
#include "support/oracles.hpp"

using namespace kslab;

namespace {

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("lorentz");

TEST_CASE("rearrangement of an indicator is a single step") {
  // indicator of measure 4 built from 8 cells of measure 0.5
  std::vector<double> values(16, 0.0);
  for (int i = 3; i < 11; ++i) values[i] = 1.0;
  auto profile = decreasing_rearrangement(values, 0.5);
  REQUIRE(profile.values.size() == 2);
  CHECK(profile.values[0] == 1.0);
  CHECK(profile.values[1] == 0.0);
  CHECK(profile.breakpoints[1] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(profile.star(3.9) == 1.0);
  CHECK(profile.star(4.1) == 0.0);
}

TEST_CASE("rearrangement of a constant field is one interval") {
  std::vector<double> values(10, -2.5);
  auto profile = decreasing_rearrangement(values, 0.3);
  REQUIRE(profile.values.size() == 1);
  CHECK(profile.values[0] == 2.5);
  CHECK(profile.total_measure == doctest::Approx(3.0));
}

TEST_CASE("rearrangement preserves the L2 integral (direct quadrature oracle)") {
  auto values = random_values(512, 7);
  const double cell = 0.125;
  const double direct = oracle::direct_lp_integral(values, cell, 2.0);
  auto profile = decreasing_rearrangement(values, cell);
  double rearranged = 0.0;
  for (std::size_t j = 0; j < profile.values.size(); ++j)
    rearranged += profile.values[j] * profile.values[j] *
                  (profile.breakpoints[j + 1] - profile.breakpoints[j]);
  CHECK(rearranged == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("rearrangement is measure preserving at every level") {
  auto values = random_values(256, 11);
  const double cell = 0.25;
  auto profile = decreasing_rearrangement(values, cell);
  for (double level : {0.1, 0.5, 1.0, 1.7}) {
    double direct = 0.0;
    for (double v : values)
      if (std::abs(v) > level) direct += cell;
    double prof = 0.0;
    for (std::size_t j = 0; j < profile.values.size(); ++j)
      if (profile.values[j] > level)
        prof += profile.breakpoints[j + 1] - profile.breakpoints[j];
    CHECK(prof == doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("empty field is rejected") {
  std::vector<double> none;
  CHECK_THROWS_AS(decreasing_rearrangement(none, 1.0), std::domain_error);
}

TEST_CASE("weak norm of an indicator is m^(1/p)") {
  std::vector<double> values(32, 0.0);
  for (int i = 0; i < 8; ++i) values[i] = 1.0;  // measure 8 * 0.5 = 4
  CHECK(lorentz_norm(values, 0.5, {2.0, kInf}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lorentz_norm(values, 0.5, {4.0, kInf}) ==
        doctest::Approx(std::pow(4.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("p = q recovers the direct Lp norm") {
  auto values = random_values(300, 3);
  const double cell = 0.05;
  for (double p : {1.5, 2.0, 3.0, 4.5}) {
    const double direct = std::pow(oracle::direct_lp_integral(values, cell, p), 1.0 / p);
    CHECK(lorentz_norm(values, cell, {p, p}) == doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("zero field has zero norm") {
  std::vector<double> values(64, 0.0);
  CHECK(lorentz_norm(values, 1.0, {2.0, kInf}) == 0.0);
  CHECK(lorentz_norm(values, 1.0, {2.0, 2.0}) == 0.0);
}

TEST_CASE("invalid exponents are rejected") {
  std::vector<double> values(8, 1.0);
  CHECK_THROWS_AS(lorentz_norm(values, 1.0, {1.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(lorentz_norm(values, 1.0, {0.5, kInf}), std::domain_error);
  CHECK_THROWS_AS(lorentz_norm(values, 1.0, {2.0, 0.5}), std::domain_error);
  // p = 1 weak norm degenerates to L1 and is allowed
  CHECK(lorentz_norm(values, 1.0, {1.0, kInf}) == doctest::Approx(8.0));
}

TEST_CASE("weak norm is dominated by L^{p,q} for q <= p") {
  std::mt19937_64 rng(17);
  const double cell = 0.1;
  for (int trial = 0; trial < 20; ++trial) {
    auto values = random_values(200, 100 + trial);
    for (double p : {1.5, 2.0, 3.0}) {
      const double weak = lorentz_norm(values, cell, {p, kInf});
      for (double q : {1.0, 0.5 * (1.0 + p), p})
        CHECK(weak <= lorentz_norm(values, cell, {p, q}) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("norm scales linearly in the field") {
  auto values = random_values(128, 23);
  auto scaled = values;
  for (auto& v : scaled) v *= -3.5;
  for (LorentzParams params : {LorentzParams{2.0, kInf}, LorentzParams{2.5, 1.5}}) {
    CHECK(lorentz_norm(scaled, 0.2, params) ==
          doctest::Approx(3.5 * lorentz_norm(values, 0.2, params)).epsilon(1e-13));
  }
}

TEST_CASE("Holder ratio of matching indicators is exactly one") {
  std::vector<double> f(40, 0.0), w(40, 0.25);
  for (int i = 0; i < 16; ++i) f[i] = 1.0;  // measure 4
  HolderExponents e{4.0, kInf, 4.0, kInf, 2.0, kInf};
  auto check = holder_ratio(f, f, w, e);
  REQUIRE(!check.degenerate);
  CHECK(check.ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("multiplying by the constant one is neutral") {
  auto values = random_values(100, 5);
  std::vector<double> ones(values.size(), 1.0), w(values.size(), 0.5);
  HolderExponents e{3.0, kInf, kInf, kInf, 3.0, kInf};
  auto check = holder_ratio(values, ones, w, e);
  REQUIRE(!check.degenerate);
  CHECK(check.ratio <= 1.0 + 1e-9);
  CHECK(check.ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Holder preconditions are enforced") {
  std::vector<double> f(10, 1.0), w(10, 1.0);
  CHECK_THROWS_AS(holder_ratio(f, f, w, HolderExponents{4.0, kInf, 4.0, kInf, 3.0, kInf}),
                  std::domain_error);
  CHECK_THROWS_AS(holder_ratio(f, f, w, HolderExponents{4.0, 2.0, 4.0, 2.0, 2.0, 0.5}),
                  std::domain_error);
}

TEST_CASE("zero denominator flags a degenerate ratio") {
  std::vector<double> f(10, 0.0), g(10, 1.0), w(10, 1.0);
  auto check = holder_ratio(f, g, w, HolderExponents{4.0, kInf, 4.0, kInf, 2.0, kInf});
  CHECK(check.degenerate);
}

TEST_CASE("Holder ratios over a random bump corpus stay bounded under refinement") {
  // 64 random Gaussian-bump pairs on a coarse and a refined grid; the largest
  // ratio must be finite and stable within 10 percent.
  HolderExponents e{4.0, kInf, 4.0, kInf, 2.0, kInf};
  double max_ratio[2] = {0.0, 0.0};
  int pass = 0;
  for (int points : {32, 64}) {
    auto grid = make_torus_grid(2, points, 10.0);
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 64; ++k) {
      auto f = oracle::random_bump_field(grid, rng);
      auto g = oracle::random_bump_field(grid, rng);
      auto check = holder_ratio(f, g, e);
      if (check.degenerate) continue;
      REQUIRE(std::isfinite(check.ratio));
      max_ratio[pass] = std::max(max_ratio[pass], check.ratio);
    }
    ++pass;
  }
  CHECK(max_ratio[0] > 0.0);
  CHECK(std::abs(max_ratio[1] - max_ratio[0]) <= 0.10 * max_ratio[0]);
}

TEST_SUITE_END();
