#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "modlab/path.hpp"
#include "modlab/rng.hpp"

using namespace modlab;

TEST_SUITE("paths") {

TEST_CASE("identity path hits the advertised grid") {
  const ModulationPath p = make_identity_path(1.0, 4);
  REQUIRE(p.t_grid.size() == 5);
  const double expect[5] = {0, 0.25, 0.5, 0.75, 1.0};
  for (int k = 0; k < 5; ++k) CHECK(p.w_values[k] == doctest::Approx(expect[k]));
  CHECK(eval_path(p, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("eval is exact at grid points and rejects t outside [0,T]") {
  const ModulationPath p = make_brownian_path(2.0, 64, 5);
  for (std::size_t k = 0; k < p.t_grid.size(); ++k)
    CHECK(eval_path(p, p.t_grid[k]) == p.w_values[k]);
  CHECK_THROWS_AS((void)eval_path(p, -0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)eval_path(p, 2.1), std::invalid_argument);
}

TEST_CASE("dispersion-managed path integrates its rate table") {
  const RateTable table = {{1.0, 0.5}, {-1.0, 0.5}};
  const ModulationPath p = make_dispersion_managed_path(table, 1.0, 10);
  CHECK(p.w_values.back() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.max_value() == doctest::Approx(0.5));
  CHECK(eval_path(p, 0.75) == doctest::Approx(0.25));
  // Slopes equal the rate table exactly.
  for (std::size_t k = 0; k + 1 < p.t_grid.size(); ++k) {
    const double slope = (p.w_values[k + 1] - p.w_values[k]) /
                         (p.t_grid[k + 1] - p.t_grid[k]);
    CHECK(std::abs(std::abs(slope) - 1.0) < 1e-12);
  }
}

TEST_CASE("dispersion-managed rejects bad tables and unresolved breakpoints") {
  CHECK_THROWS_AS(make_dispersion_managed_path({}, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(make_dispersion_managed_path({{0.0, 0.5}}, 1.0, 8),
                  std::invalid_argument);
  // Breakpoint at 0.5 does not land on a 3-point grid.
  CHECK_THROWS_AS(make_dispersion_managed_path({{1.0, 0.5}, {-1.0, 0.5}}, 1.0, 3),
                  std::invalid_argument);
}

TEST_CASE("generators are bit-deterministic") {
  const ModulationPath a = make_brownian_path(1.0, 512, 42);
  const ModulationPath b = make_brownian_path(1.0, 512, 42);
  CHECK(a.w_values == b.w_values);
  const ModulationPath c = make_fbm_path(0.7, 1.0, 512, 42);
  const ModulationPath d = make_fbm_path(0.7, 1.0, 512, 42);
  CHECK(c.w_values == d.w_values);
  CHECK(a.w_values != c.w_values);
}

TEST_CASE("brownian terminal variance matches Var(W_1) = 1") {
  const int n_seeds = 4000;
  const std::size_t n = 512;
  double sum = 0, sum2 = 0;
  for (int s = 0; s < n_seeds; ++s) {
    const double w = make_brownian_path(1.0, n, 1000 + s).w_values.back();
    sum += w;
    sum2 += w * w;
  }
  const double var = (sum2 - sum * sum / n_seeds) / (n_seeds - 1);
  const double se = std::sqrt(2.0 / (n_seeds - 1));  // sd of sample variance
  CHECK(std::abs(var - 1.0) < 3 * se);
}

// Covariance oracle: E[W_s W_t] = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
static double fbm_cov(double s, double t, double h) {
  return 0.5 * (std::pow(s, 2 * h) + std::pow(t, 2 * h) -
                std::pow(std::abs(t - s), 2 * h));
}

TEST_CASE("fbm empirical covariance matches the oracle") {
  const double H = 0.7;
  const std::size_t n = 64;
  const int n_seeds = 3000;
  const std::size_t i = 20, j = 50;
  double acc_ij = 0, acc_brownian = 0;
  for (int s = 0; s < n_seeds; ++s) {
    const ModulationPath p = make_fbm_path(H, 1.0, n, 500 + s);
    acc_ij += p.w_values[i] * p.w_values[j];
    const ModulationPath b = make_fbm_path(0.5, 1.0, n, 500 + s);
    acc_brownian += b.w_values[i] * b.w_values[j];
  }
  const double ti = static_cast<double>(i) / n, tj = static_cast<double>(j) / n;
  CHECK(acc_ij / n_seeds == doctest::Approx(fbm_cov(ti, tj, H)).epsilon(0.08));
  // H = 1/2 must reproduce the Brownian covariance min(s,t).
  CHECK(acc_brownian / n_seeds == doctest::Approx(ti).epsilon(0.08));
}

TEST_CASE("fbm self-similarity: Var(W_t) / t^{2H} constant on a dyadic grid") {
  const double H = 0.3;
  const std::size_t n = 256;
  const int n_seeds = 2000;
  double ratio_min = 1e300, ratio_max = 0;
  for (std::size_t frac = 1; frac <= 4; ++frac) {
    const std::size_t idx = n >> frac;
    const double t = static_cast<double>(idx) / n;
    double acc = 0;
    for (int s = 0; s < n_seeds; ++s) {
      const double w = make_fbm_path(H, 1.0, n, 9000 + s).w_values[idx];
      acc += w * w;
    }
    const double ratio = (acc / n_seeds) / std::pow(t, 2 * H);
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  CHECK(ratio_max / ratio_min < 1.15);
}

TEST_CASE("fbm rejects Hurst outside (0,1)") {
  CHECK_THROWS_AS(make_fbm_path(0.0, 1.0, 64, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_fbm_path(1.0, 1.0, 64, 1), std::invalid_argument);
}

TEST_CASE("csv round trip preserves the path and validates invariants") {
  const auto file = std::filesystem::temp_directory_path() / "modlab_path_test.csv";
  const ModulationPath p = make_brownian_path(1.0, 128, 3);
  save_path_csv(p, file.string());
  const ModulationPath q = load_path_csv(file.string());
  REQUIRE(q.t_grid.size() == p.t_grid.size());
  for (std::size_t k = 0; k < p.t_grid.size(); ++k) {
    CHECK(q.t_grid[k] == doctest::Approx(p.t_grid[k]).epsilon(1e-15));
    CHECK(q.w_values[k] == doctest::Approx(p.w_values[k]).epsilon(1e-15));
  }
  std::filesystem::remove(file);
}

TEST_CASE("clip restricts the horizon and interpolates the cut") {
  const ModulationPath p = make_brownian_path(1.0, 100, 11);
  const ModulationPath c = clip_path(p, 0.505);
  CHECK(c.horizon() == doctest::Approx(0.505));
  CHECK(c.value(0.505) == doctest::Approx(p.value(0.505)));
  CHECK(c.value(0.25) == doctest::Approx(p.value(0.25)));
}

}  // TEST_SUITE
