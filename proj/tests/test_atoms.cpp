#include <doctest.h>

#include <cmath>
#include <complex>

#include "modlab/atoms.hpp"
#include "modlab/rng.hpp"

using namespace modlab;

namespace {

// Test-only oracle: maximum over every sub-partition (endpoints anchored).
double vp_bruteforce(const DiscretePath& p, double q) {
  const std::size_t K = p.points();
  const std::size_t interior = K - 2;
  double best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << interior); ++mask) {
    double acc = 0;
    std::size_t prev = 0;
    for (std::size_t b = 0; b < interior; ++b)
      if (mask & (std::size_t{1} << b)) {
        acc += std::pow(vec_dist(p.values[b + 1], p.values[prev]), q);
        prev = b + 1;
      }
    acc += std::pow(vec_dist(p.values[K - 1], p.values[prev]), q);
    best = std::max(best, acc);
  }
  return std::pow(best, 1.0 / q);
}

}  // namespace

TEST_SUITE("atoms") {

TEST_CASE("two points give the single increment") {
  DiscretePath p;
  p.t_end = 1.0;
  p.times = {0.0, 0.5};
  p.values = {{{1.0, 0.0}}, {{0.0, 2.0}}};
  CHECK(vp_norm(p, 2.0) == doctest::Approx(std::sqrt(1.0 + 4.0)).epsilon(1e-14));
  CHECK(vp_norm(p, 1.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("monotone scalar data at p = 1 telescopes to the total increment") {
  DiscretePath p;
  p.t_end = 1.0;
  p.times = {0.0, 0.2, 0.4, 0.6, 0.8};
  for (double v : {0.0, 0.3, 0.7, 1.2, 2.0})
    p.values.push_back({std::complex<double>(v, 0)});
  CHECK(vp_norm(p, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("dp equals brute-force enumeration on random paths") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const DiscretePath p = random_discrete_path(6, 3, 1.0, seed);
    for (double q : {1.0, 2.0, 3.5}) {
      CHECK(vp_norm(p, q) ==
            doctest::Approx(vp_bruteforce(p, q)).epsilon(1e-13));
    }
  }
}

TEST_CASE("removing sample points never increases the p-variation") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const DiscretePath p = random_discrete_path(8, 2, 1.0, 100 + seed);
    DiscretePath sub;
    sub.t_end = p.t_end;
    for (std::size_t k = 0; k < p.points(); ++k)
      if (k == 0 || k == p.points() - 1 || k % 2 == 0) {
        sub.times.push_back(p.times[k]);
        sub.values.push_back(p.values[k]);
      }
    CHECK(vp_norm(sub, 2.0) <= vp_norm(p, 2.0) + 1e-13);
  }
}

TEST_CASE("p-variation decreases in p") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const DiscretePath p = random_discrete_path(7, 2, 1.0, 200 + seed);
    const double v1 = vp_norm(p, 1.0);
    const double v2 = vp_norm(p, 2.0);
    const double v4 = vp_norm(p, 4.0);
    CHECK(v1 >= v2 - 1e-13);
    CHECK(v2 >= v4 - 1e-13);
  }
}

TEST_CASE("atomic bound: a single unit jump is an atom of size 1") {
  DiscretePath p;
  p.t_end = 1.0;
  p.times = {0.0, 0.4};
  p.values = {{{0.0, 0.0}}, {{0.6, 0.8}}};  // norm 1 jump
  const auto dec = up_atomic_upper(p, 2.0);
  CHECK(dec.bound == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(dec.atoms.size() == 1);
  CHECK(dec.atoms[0].scale == doctest::Approx(1.0));

  // Homogeneity: scaling the path scales the bound.
  DiscretePath q = p;
  for (auto& val : q.values)
    for (auto& c : val) c *= 3.5;
  CHECK(up_atomic_upper(q, 2.0).bound == doctest::Approx(3.5).epsilon(1e-13));
}

TEST_CASE("atomic bound rejects nonzero left values and dominates vp") {
  DiscretePath bad = random_discrete_path(5, 2, 1.0, 7);
  CHECK_THROWS_AS(up_atomic_upper(bad, 2.0), std::invalid_argument);

  double worst = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    DiscretePath p = random_discrete_path(6, 3, 1.0, 300 + seed);
    for (auto& c : p.values[0]) c = 0;
    const double vp = vp_norm(p, 2.0);
    const double up = up_atomic_upper(p, 2.0).bound;
    if (up > 0) worst = std::max(worst, vp / up);
  }
  CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("duality: zero integrand pairs to zero") {
  DiscretePath f;
  f.t_end = 1.0;
  f.times = {0.0, 0.5};
  f.values = {{{0.0, 0.0}}, {{0.0, 0.0}}};
  const auto wit = make_duality_witnesses(f, 8, 1);
  CHECK(duality_lower(f, wit) == 0.0);
}

TEST_CASE("constant integrand: aligned witness attains ||f|| * T") {
  DiscretePath f;
  f.t_end = 1.0;
  f.times = {0.0};
  f.values = {{{3.0, 4.0}}};  // norm 5 on [0, 1)
  const auto wit = make_duality_witnesses(f, 16, 2);
  const double lower = duality_lower(f, wit);
  CHECK(lower == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("duality lower bound is monotone in the witness set and sandwiched") {
  const DiscretePath f = random_discrete_path(6, 3, 1.0, 11);
  const auto w1 = make_duality_witnesses(f, 16, 5);
  const auto w2 = make_duality_witnesses(f, 64, 5);
  const double l1 = duality_lower(f, w1);
  const double l2 = duality_lower(f, w2);
  CHECK(l2 >= l1 - 1e-15);
  const double up = up_atomic_upper(primitive_path(f), 2.0).bound;
  CHECK(l2 <= up + 1e-12);
}

TEST_CASE("unnormalized witnesses are rejected") {
  const DiscretePath f = random_discrete_path(4, 2, 1.0, 13);
  DiscretePath w = random_discrete_path(4, 2, 1.0, 14);
  for (auto& val : w.values)
    for (auto& c : val) c *= 100.0;  // V^2 far above 1
  CHECK_THROWS_AS(duality_lower(f, {w}), std::invalid_argument);
}

}  // TEST_SUITE
