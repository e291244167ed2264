#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace modlab {

// Signed lattice constraint behind the multilinear resonance sums: 2m+2
// factors with alternating conjugation signs (-,+,-,+,...), momentum
// sum_j s_j n_j = 0, resonance function Omega = sum_j s_j |n_j|^2.
struct LatticeConstraint {
  int dim = 1;  // 1 or 2
  int m = 1;    // half-degree: 2m+2 factors
  std::vector<int> signs;

  static LatticeConstraint cubic(int dim);              // m = 1
  static LatticeConstraint make(int dim, int m);
  void validate() const;
  int factors() const { return 2 * m + 2; }
};

struct FactorizationReport {
  long long checked = 0;            // constrained quadruples visited
  long long identity_violations = 0;  // of Omega == 2(n1-n2)(n2-n3)
  long long printed_factor_mismatches = 0;  // |Omega| != 2|(n1-n2)(n0-n2)|
  struct Witness {
    std::array<long long, 4> n;  // (n0, n1, n2, n3)
    long long omega;
    long long derived;  // 2 (n1-n2)(n2-n3)
    long long printed;  // 2 (n1-n2)(n0-n2)
  };
  std::vector<Witness> violation_witnesses;   // empty when the identity holds
  std::vector<Witness> mismatch_witnesses;    // first few printed-factor cases
};

// Exhausts all quadruples with n1 - n2 + n3 = n0 and |n_j| <= n_range, in
// exact integer arithmetic. Verifies Omega = n1^2 - n2^2 + n3^2 - n0^2 =
// 2(n1-n2)(n2-n3) and cross-tabulates the factor (n1-n2)(n0-n2) against
// |Omega| (see wick_weight_sum for where that factor is used).
FactorizationReport cubic_factorization_check(long long n_range,
                                              std::size_t max_witnesses = 16);

// Partial sum over 0 < |m1|, |m2| <= M of <m1 m2>^{-a} with the Japanese
// bracket <x> = (1 + x^2)^{1/2}. Rejects a <= 1 (divergent regime).
double wick_weight_sum(double r_prime_rho, long long M);

struct RestrictionSumSpec {
  LatticeConstraint constraint;
  std::vector<int> block_sizes;  // dyadic N_j per factor, |n_j| ~ N_j
  // Optional max-norm cube restriction on factors 0 and 1.
  struct Cube {
    std::array<long long, 2> center{0, 0};
    long long half_side = 0;
  };
  std::optional<Cube> cube0, cube1;
  std::optional<long long> nu;  // fixed resonance level; otherwise sup over nu
  double weight_rho = 0;        // when > 0, weight <Omega>^{-rho} and sum over nu
  // Per-factor nonnegative coefficient; identity (unit) when absent.
  std::function<double(int factor, const std::array<long long, 2>&)> coefficients;
};

// Exact enumeration of the constrained sum at desk scale. Guards: d <= 2,
// m <= 2, all N <= 16, and a cap on the enumeration volume.
double restriction_sum_bruteforce(const RestrictionSumSpec& spec);

// Dyadic annulus membership: |n| ~ N means N/2 < |n| <= N (all of |n| <= 1
// for N = 1), Euclidean norm.
bool in_dyadic_annulus(const std::array<long long, 2>& n, int dim, int N);

// Strip decomposition of Lemma-4.2 type: index of the width-M strip of the
// cube centered at `center` that contains n (projection onto the center
// direction, integer arithmetic times |center|).
long long strip_index(const std::array<long long, 2>& n,
                      const std::array<long long, 2>& center, long long M,
                      int dim);

struct StripPairingReport {
  long long M = 1;
  long long tuples = 0;
  long long max_alpha_beta_spread = 0;  // max over tuples of |s0 a + s1 b|
  long long max_betas_per_alpha = 0;
};

// Exhaustive check, for cubic tuples with |Omega| << N2^2 and n0, n1 in
// adjacent cubes of side N2 at distance ~N1, that each strip alpha pairs
// with O(1) strips beta.
StripPairingReport strip_pairing_check(int dim, int N1, int N2);

}  // namespace modlab
