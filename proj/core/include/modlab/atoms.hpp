#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace modlab {

// Right-continuous step function on [t_front, t_end) with values in a
// finite-dimensional complex inner-product space. times are strictly
// increasing sample points; values[k] holds on [times[k], times[k+1]).
struct DiscretePath {
  std::vector<double> times;
  std::vector<std::vector<std::complex<double>>> values;
  double t_end = 1.0;

  std::size_t points() const { return times.size(); }
  std::size_t dim() const { return values.empty() ? 0 : values[0].size(); }
  void validate() const;

  // V^p-space convention: the function vanishes as t tends to the right
  // endpoint. Returns a copy with an explicit terminal zero sample.
  DiscretePath with_terminal_zero() const;
};

double vec_norm(const std::vector<std::complex<double>>& v);
double vec_dist(const std::vector<std::complex<double>>& a,
                const std::vector<std::complex<double>>& b);

// Exact p-variation over all sub-partitions of the stored grid anchored at
// both endpoints, by dynamic programming: best(j) = max_{i<j} best(i) +
// ||u_j - u_i||^p. O(K^2 M).
double vp_norm(const DiscretePath& path, double p);

struct AtomicDecomposition {
  double bound = 0;  // sum of |lambda_j|: a certified U^p upper bound
  struct Atom {
    double time;
    double scale;                                // lambda_j
    std::vector<std::complex<double>> direction; // unit jump direction
  };
  std::vector<Atom> atoms;
};

// Canonical single-atom-per-jump decomposition of a left-vanishing step
// function. An upper bound on the U^p norm, not the norm itself; the
// decomposition is returned for audit.
AtomicDecomposition up_atomic_upper(const DiscretePath& path, double p);

// Certified lower bound on the DU^2 duality norm of an integrand f: the
// maximum of |sum_k <f_k, v_k> dt_k| over V^2-unit-ball witnesses.
// Witnesses whose V^2 norm exceeds 1 (beyond roundoff) are rejected.
double duality_lower(const DiscretePath& f,
                     const std::vector<DiscretePath>& witnesses);

// Witness set for duality_lower: the greedy sign-aligned witness, a
// constant aligned witness, and `count` random V^2-normalized step paths.
std::vector<DiscretePath> make_duality_witnesses(const DiscretePath& f,
                                                 std::size_t count,
                                                 uint64_t seed);

// Riemann-sum primitive of f as a left-vanishing step path, for the
// one-sided sandwich duality_lower <= up_atomic_upper(primitive).
DiscretePath primitive_path(const DiscretePath& f);

DiscretePath random_discrete_path(std::size_t points, std::size_t dim,
                                  double t_end, uint64_t seed);

}  // namespace modlab
