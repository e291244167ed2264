#include "modlab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace modlab {

LatticeConstraint LatticeConstraint::cubic(int dim) { return make(dim, 1); }

LatticeConstraint LatticeConstraint::make(int dim, int m) {
  LatticeConstraint c;
  c.dim = dim;
  c.m = m;
  c.signs.resize(2 * m + 2);
  for (int j = 0; j < 2 * m + 2; ++j) c.signs[j] = (j % 2 == 0) ? -1 : +1;
  c.validate();
  return c;
}

void LatticeConstraint::validate() const {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("lattice constraint: dim must be 1 or 2");
  if (m < 1) throw std::invalid_argument("lattice constraint: m >= 1");
  if (static_cast<int>(signs.size()) != factors())
    throw std::invalid_argument("lattice constraint: wrong sign count");
  int plus = 0, minus = 0;
  for (int s : signs) {
    if (s == 1)
      ++plus;
    else if (s == -1)
      ++minus;
    else
      throw std::invalid_argument("lattice constraint: signs must be +-1");
  }
  if (plus != minus)
    throw std::invalid_argument(
        "lattice constraint: conjugation pattern needs equal +/- counts");
}

FactorizationReport cubic_factorization_check(long long n_range,
                                              std::size_t max_witnesses) {
  if (n_range < 1) throw std::invalid_argument("factorization check: range >= 1");
  FactorizationReport rep;
  for (long long n1 = -n_range; n1 <= n_range; ++n1)
    for (long long n2 = -n_range; n2 <= n_range; ++n2)
      for (long long n3 = -n_range; n3 <= n_range; ++n3) {
        const long long n0 = n1 - n2 + n3;
        if (n0 < -n_range || n0 > n_range) continue;
        ++rep.checked;
        const long long omega = n1 * n1 - n2 * n2 + n3 * n3 - n0 * n0;
        const long long derived = 2 * (n1 - n2) * (n2 - n3);
        const long long printed = 2 * (n1 - n2) * (n0 - n2);
        if (omega != derived) {
          ++rep.identity_violations;
          if (rep.violation_witnesses.size() < max_witnesses)
            rep.violation_witnesses.push_back(
                {{n0, n1, n2, n3}, omega, derived, printed});
        }
        if (std::llabs(omega) != std::llabs(printed)) {
          ++rep.printed_factor_mismatches;
          if (rep.mismatch_witnesses.size() < max_witnesses)
            rep.mismatch_witnesses.push_back(
                {{n0, n1, n2, n3}, omega, derived, printed});
        }
      }
  return rep;
}

double wick_weight_sum(double r_prime_rho, long long M) {
  if (!(r_prime_rho > 1.0))
    throw std::invalid_argument(
        "wick_weight_sum: exponent must exceed 1 (series diverges otherwise)");
  if (M < 1) throw std::invalid_argument("wick_weight_sum: M >= 1");
  double sum = 0;
  for (long long m1 = 1; m1 <= M; ++m1)
    for (long long m2 = 1; m2 <= M; ++m2) {
      const double k = static_cast<double>(m1) * static_cast<double>(m2);
      sum += std::pow(1.0 + k * k, -0.5 * r_prime_rho);
    }
  return 4.0 * sum;  // sign choices of (m1, m2)
}

bool in_dyadic_annulus(const std::array<long long, 2>& n, int dim, int N) {
  const long long sq = n[0] * n[0] + (dim == 2 ? n[1] * n[1] : 0);
  const long long hi = static_cast<long long>(N) * N;
  if (N == 1) return sq <= 1;
  const long long lo = (static_cast<long long>(N) / 2) * (N / 2);
  return sq > lo && sq <= hi;
}

namespace {

std::vector<std::array<long long, 2>> annulus_points(int dim, int N,
                                                     const std::optional<RestrictionSumSpec::Cube>& cube) {
  std::vector<std::array<long long, 2>> pts;
  const long long R = N;
  if (dim == 1) {
    for (long long a = -R; a <= R; ++a) {
      std::array<long long, 2> n{a, 0};
      if (!in_dyadic_annulus(n, 1, N)) continue;
      if (cube && std::llabs(a - cube->center[0]) > cube->half_side) continue;
      pts.push_back(n);
    }
  } else {
    for (long long a = -R; a <= R; ++a)
      for (long long b = -R; b <= R; ++b) {
        std::array<long long, 2> n{a, b};
        if (!in_dyadic_annulus(n, 2, N)) continue;
        if (cube && (std::llabs(a - cube->center[0]) > cube->half_side ||
                     std::llabs(b - cube->center[1]) > cube->half_side))
          continue;
        pts.push_back(n);
      }
  }
  return pts;
}

}  // namespace

double restriction_sum_bruteforce(const RestrictionSumSpec& spec) {
  spec.constraint.validate();
  const int dim = spec.constraint.dim;
  const int m = spec.constraint.m;
  if (m > 2) throw std::invalid_argument("restriction sum: m <= 2 at desk scale");
  const int nf = spec.constraint.factors();
  if (static_cast<int>(spec.block_sizes.size()) != nf)
    throw std::invalid_argument("restriction sum: one block size per factor");
  for (int N : spec.block_sizes)
    if (N < 1 || N > 16 || (N & (N - 1)) != 0)
      throw std::invalid_argument(
          "restriction sum: block sizes must be dyadic and <= 16");
  if (spec.weight_rho > 0 && spec.nu)
    throw std::invalid_argument(
        "restriction sum: weighted mode sums over nu, do not fix it");

  // Factors 1..2m+1 are enumerated; factor 0 is solved from the momentum
  // constraint (its sign is -1 by the conjugation pattern).
  std::vector<std::vector<std::array<long long, 2>>> support(nf);
  double volume = 1;
  for (int j = 1; j < nf; ++j) {
    support[j] = annulus_points(dim, spec.block_sizes[j],
                                j == 1 ? spec.cube1 : std::nullopt);
    volume *= static_cast<double>(support[j].size());
    if (volume > 2e8)
      throw std::invalid_argument("restriction sum: enumeration volume guard");
  }

  const auto& signs = spec.constraint.signs;
  std::map<long long, double> by_nu;
  double weighted = 0;

  std::vector<std::size_t> odo(static_cast<std::size_t>(nf), 0);
  std::vector<std::array<long long, 2>> n(static_cast<std::size_t>(nf));
  bool done = false;
  for (int j = 1; j < nf; ++j)
    if (support[static_cast<std::size_t>(j)].empty()) done = true;

  while (!done) {
    for (int j = 1; j < nf; ++j)
      n[static_cast<std::size_t>(j)] =
          support[static_cast<std::size_t>(j)][odo[static_cast<std::size_t>(j)]];

    // Solve s0 n0 + sum_{j>=1} s_j n_j = 0 for n0.
    std::array<long long, 2> rest{0, 0};
    for (int j = 1; j < nf; ++j) {
      rest[0] += signs[static_cast<std::size_t>(j)] * n[static_cast<std::size_t>(j)][0];
      rest[1] += signs[static_cast<std::size_t>(j)] * n[static_cast<std::size_t>(j)][1];
    }
    n[0] = {-signs[0] * rest[0], -signs[0] * rest[1]};

    bool ok = in_dyadic_annulus(n[0], dim, spec.block_sizes[0]);
    if (ok && spec.cube0)
      ok = std::llabs(n[0][0] - spec.cube0->center[0]) <= spec.cube0->half_side &&
           (dim == 1 ||
            std::llabs(n[0][1] - spec.cube0->center[1]) <= spec.cube0->half_side);
    if (ok) {
      long long omega = 0;
      for (int j = 0; j < nf; ++j)
        omega += signs[static_cast<std::size_t>(j)] *
                 (n[static_cast<std::size_t>(j)][0] * n[static_cast<std::size_t>(j)][0] +
                  n[static_cast<std::size_t>(j)][1] * n[static_cast<std::size_t>(j)][1]);
      double term = 1.0;
      if (spec.coefficients)
        for (int j = 0; j < nf; ++j)
          term *= spec.coefficients(j, n[static_cast<std::size_t>(j)]);
      if (term != 0) {
        if (spec.weight_rho > 0) {
          const double o = static_cast<double>(omega);
          weighted += term * std::pow(1.0 + o * o, -0.5 * spec.weight_rho);
        } else if (spec.nu) {
          if (omega == *spec.nu) weighted += term;
        } else {
          by_nu[omega] += term;
        }
      }
    }

    // Advance the odometer over factors 1..nf-1.
    int j = 1;
    for (; j < nf; ++j) {
      auto& pos = odo[static_cast<std::size_t>(j)];
      if (++pos < support[static_cast<std::size_t>(j)].size()) break;
      pos = 0;
    }
    if (j == nf) done = true;
  }

  if (spec.weight_rho > 0 || spec.nu) return weighted;
  double sup = 0;
  for (const auto& [nu, v] : by_nu) sup = std::max(sup, v);
  return sup;
}

long long strip_index(const std::array<long long, 2>& n,
                      const std::array<long long, 2>& center, long long M,
                      int dim) {
  // Strips { n : n . c in [alpha |c| M, (alpha+1) |c| M) }; work with the
  // exact integer n . c and the rounded |c| M width.
  const long long dot = n[0] * center[0] + (dim == 2 ? n[1] * center[1] : 0);
  const double mag = std::sqrt(static_cast<double>(
      center[0] * center[0] + (dim == 2 ? center[1] * center[1] : 0)));
  const double width = mag * static_cast<double>(M);
  return static_cast<long long>(std::floor(static_cast<double>(dot) / width));
}

StripPairingReport strip_pairing_check(int dim, int N1, int N2) {
  if (N1 < 2 || N1 > 16 || N2 < 1 || N2 > N1)
    throw std::invalid_argument("strip pairing: need 2 <= N2 <= N1 <= 16");
  StripPairingReport rep;
  const long long M =
      std::max<long long>(1, (static_cast<long long>(N2) * N2) / N1);
  rep.M = M;

  const std::array<long long, 2> c0{N1, 0};
  const std::array<long long, 2> c1{dim == 2 ? 0 : N1, dim == 2 ? N1 : 0};
  const long long half = N2;

  std::map<long long, std::map<long long, bool>> betas_of_alpha;
  auto scan = [&](auto&& body) {
    for (long long a0 = c0[0] - half; a0 <= c0[0] + half; ++a0)
      for (long long a1 = (dim == 2 ? c0[1] - half : 0);
           a1 <= (dim == 2 ? c0[1] + half : 0); ++a1)
        for (long long b0 = c1[0] - half; b0 <= c1[0] + half; ++b0)
          for (long long b1 = (dim == 2 ? c1[1] - half : 0);
               b1 <= (dim == 2 ? c1[1] + half : 0); ++b1)
            body(std::array<long long, 2>{a0, a1},
                 std::array<long long, 2>{b0, b1});
  };

  // Cubic pattern (-,+,-,+): n0 conjugated, n1 plain; close the constraint
  // with n2, n3 of size O(N2) and require |Omega| << N2^2.
  scan([&](const std::array<long long, 2>& n0, const std::array<long long, 2>& n1) {
    for (long long m0 = -N2; m0 <= N2; ++m0)
      for (long long m1 = (dim == 2 ? -N2 : 0); m1 <= (dim == 2 ? N2 : 0); ++m1) {
        const std::array<long long, 2> n2{m0, m1};
        const std::array<long long, 2> n3{n0[0] - n1[0] + n2[0],
                                          n0[1] - n1[1] + n2[1]};
        if (std::llabs(n3[0]) > 2 * N2 || std::llabs(n3[1]) > 2 * N2) continue;
        const long long omega = -(n0[0] * n0[0] + n0[1] * n0[1]) +
                                (n1[0] * n1[0] + n1[1] * n1[1]) -
                                (n2[0] * n2[0] + n2[1] * n2[1]) +
                                (n3[0] * n3[0] + n3[1] * n3[1]);
        if (std::llabs(omega) >= static_cast<long long>(N2) * N2) continue;
        const long long alpha = strip_index(n0, c0, M, dim);
        const long long beta = strip_index(n1, c1, M, dim);
        ++rep.tuples;
        rep.max_alpha_beta_spread =
            std::max(rep.max_alpha_beta_spread, std::llabs(-alpha + beta));
        betas_of_alpha[alpha][beta] = true;
      }
  });
  for (const auto& [alpha, betas] : betas_of_alpha)
    rep.max_betas_per_alpha = std::max(
        rep.max_betas_per_alpha, static_cast<long long>(betas.size()));
  return rep;
}

}  // namespace modlab
