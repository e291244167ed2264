// Acceptance suite: ten numbered criteria, one pass/fail line each.
// Usage: acceptance [criterion]   (no argument runs all ten)

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "modlab/atoms.hpp"
#include "modlab/experiment.hpp"
#include "modlab/occupation.hpp"
#include "modlab/path.hpp"
#include "modlab/resonance.hpp"
#include "modlab/rng.hpp"
#include "modlab/solver.hpp"
#include "modlab/spectral.hpp"

using namespace modlab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- helpers shared by several criteria -----------------------------------

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j)
    g[j] = lo * std::pow(hi / lo, static_cast<double>(j) / (n - 1));
  return g;
}

std::vector<std::pair<double, double>> dyadic_pairs(double T, int seps,
                                                    int offsets) {
  std::vector<std::pair<double, double>> pairs;
  for (int j = 0; j < seps; ++j) {
    const double sep = T / std::pow(2.0, j + 2);
    for (int o = 0; o < offsets; ++o)
      pairs.emplace_back((T - sep) * o / offsets,
                         (T - sep) * o / offsets + sep);
  }
  return pairs;
}

ExperimentConfig inline_experiment(const std::string& id,
                                   const std::string& text,
                                   const std::string& tag) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("modlab_acceptance_" + tag);
  fs::remove_all(dir);
  ExperimentConfig cfg;
  cfg.id = id;
  cfg.values = Config::parse_text(text, "acceptance:" + tag);
  cfg.out_dir = dir.string();
  cfg.jobs = 2;
  return cfg;
}

// --- criteria --------------------------------------------------------------

// 1. Linear unitarity across all dispersion symbols.
Check criterion_unitarity() {
  Check c;
  const SpectralField u0 = random_field(1, 256, kTwoPi, 1, 100);
  const SpectralField u0_2d = random_field(2, 16, kTwoPi, 2, 6);
  CounterRng rng(77, 0);
  double worst = 0;
  for (const auto& symbol :
       {DispersionSymbol::schroedinger(), DispersionSymbol::airy(),
        DispersionSymbol::fractional(2.5)}) {
    for (int k = 0; k < 1000; ++k) {
      const double dw = 10.0 * (rng.uniform(static_cast<uint64_t>(k)) - 0.5);
      const SpectralField v = propagate_linear(u0, symbol, dw);
      worst = std::max(worst,
                       std::abs(v.l2_norm() - u0.l2_norm()) / u0.l2_norm());
    }
  }
  for (int k = 0; k < 100; ++k) {
    const double dw = 10.0 * (rng.uniform(static_cast<uint64_t>(5000 + k)) - 0.5);
    const SpectralField v =
        propagate_linear(u0_2d, DispersionSymbol::schroedinger(), dw);
    worst =
        std::max(worst, std::abs(v.l2_norm() - u0_2d.l2_norm()) / u0_2d.l2_norm());
  }
  c.require(worst <= 1e-12, "relative L2 change " + fmt(worst) + " > 1e-12");
  c.note("max relative L2 change " + fmt(worst));
  return c;
}

// 2. Occupation time formula.
Check criterion_occupation_formula() {
  Check c;
  const auto sq = [](double z) { return z * z; };
  const ModulationPath ident = make_identity_path(1.0, 1024);
  const OccupationCheck id_check = check_occupation_formula(ident, sq, 1.0, 4096);
  c.require(std::abs(id_check.lhs - 1.0 / 3.0) <= 1e-10,
            "identity lhs " + fmt(id_check.lhs) + " != 1/3");

  const ModulationPath bm = make_brownian_path(1.0, 1 << 18, 7);
  const OccupationCheck pinned = check_occupation_formula(bm, sq, 1.0, 4096);
  c.require(pinned.rel_err <= 1e-2,
            "brownian rel_err " + fmt(pinned.rel_err) + " > 1e-2");

  // Halving under bin-count doubling, measured as the least-squares rate
  // over a dyadic sweep: single doublings sit at the alignment-noise floor
  // because the bin masses come from exact segment geometry.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t bins = 256; bins <= 8192; bins *= 2) {
    const OccupationCheck oc = check_occupation_formula(bm, sq, 1.0, bins);
    const double x = std::log2(static_cast<double>(bins));
    const double y = std::log2(oc.rel_err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double slope =
      (count * sxy - sx * sy) / (count * sxx - sx * sx);
  c.require(slope <= -1.0,
            "rel_err decay rate " + fmt(slope) + " per doubling is slower than halving");
  c.note("brownian rel_err " + fmt(pinned.rel_err) + " at 4096 bins, decay rate " +
         fmt(slope) + " per doubling");
  return c;
}

// 3. Identity-path closed form and rho(gamma) = 1 - gamma.
Check criterion_identity_fourier() {
  Check c;
  const ModulationPath ident = make_identity_path(1.0, 4096);
  double worst = 0;
  for (double t : {0.25, 0.7, 1.0}) {
    for (int k = -1000; k <= 1000; k += 1) {
      const double xi = static_cast<double>(k) + 0.37;  // avoid exact zero
      const std::complex<double> got = fourier_localtime(ident, t, xi);
      const double ref = std::abs(std::polar(1.0, t * xi) - 1.0) / std::abs(xi);
      worst = std::max(worst, std::abs(std::abs(got) - ref));
    }
  }
  c.require(worst <= 1e-10, "closed-form deviation " + fmt(worst) + " > 1e-10");

  const auto fits =
      estimate_irregularity(ident, {0.0, 0.25, 0.5}, log_grid(1.0, 1024.0, 96),
                            dyadic_pairs(1.0, 10, 4));
  for (const auto& fit : fits) {
    const double expectrho = 1.0 - fit.gamma;
    c.require(std::abs(fit.rho_hat - expectrho) <= 0.1,
              "rho(" + fmt(fit.gamma) + ") = " + fmt(fit.rho_hat) +
                  " not within 0.1 of " + fmt(expectrho));
    c.note("rho(" + fmt(fit.gamma) + ") = " + fmt(fit.rho_hat));
  }
  return c;
}

// 4. fBm irregularity at H = 1/2.
Check criterion_fbm_irregularity() {
  Check c;
  std::vector<double> rhos;
  const auto xi = log_grid(1.0, 1024.0, 64);
  const auto pairs = dyadic_pairs(1.0, 9, 4);
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    const ModulationPath p = make_fbm_path(0.5, 1.0, 1 << 16, seed);
    rhos.push_back(estimate_irregularity(p, {0.5}, xi, pairs)[0].rho_hat);
  }
  std::sort(rhos.begin(), rhos.end());
  const double median = 0.5 * (rhos[49] + rhos[50]);
  c.require(median <= 1.15, "median rho " + fmt(median) + " > 1.15");
  c.note("median rho " + fmt(median) + ", range [" + fmt(rhos.front()) + ", " +
         fmt(rhos.back()) + "]");
  return c;
}

// 5. Strichartz transfer through the occupation formula.
Check criterion_strichartz_transfer() {
  Check c;
  auto cfg = inline_experiment("strichartz-transfer",
                               "experiment = strichartz-transfer\n"
                               "[field]\nn_modes = 64\nmax_mode = 16\n"
                               "[transfer]\nT = 0.5\npath_n = 2048\n"
                               "path_seeds = 1,2,3,4,5,6,7,8,9,10\n"
                               "n_data = 20\ndata_seed = 100\n"
                               "tolerance = 0.05\ninf_threshold = 0.05\n"
                               "n_bins = 4096\nz_quad = 32768\n",
                               "transfer");
  const ExperimentReport rep = run_experiment(cfg);
  for (const auto& v : rep.verdicts) {
    c.require(v.pass, v.name + " failed (value " + fmt(v.value) + ")");
    c.note(v.name + " value " + fmt(v.value));
  }
  return c;
}

// 6. C_W(T) vanishing for Brownian paths but not the identity.
Check criterion_cw_vanishing() {
  Check c;
  auto cfg = inline_experiment("cw-vanishing",
                               "experiment = cw-vanishing\n"
                               "[cw]\nT = 1.0\npath_n = 16384\n"
                               "seeds = 1,2,3,4,5,6,7,8,9,10\n"
                               "divisor = 8\nn_bins = 2048\nfactor = 2.0\n"
                               "identity_max_ratio = 1.2\n",
                               "cw");
  const ExperimentReport rep = run_experiment(cfg);
  for (const auto& v : rep.verdicts) {
    c.require(v.pass, v.name + " failed (value " + fmt(v.value) + ")");
    c.note(v.name + " value " + fmt(v.value));
  }
  return c;
}

// 7. Conservation and gauge equivalence.
Check criterion_conservation() {
  Check c;
  const ModulationPath path = make_brownian_path(1.0, 1 << 12, 3);
  const SpectralField u0 = random_field(1, 256, kTwoPi, 17, 80);

  auto drift_of = [](const Trajectory& t) {
    double d = 0;
    for (double m : t.mass) d = std::max(d, std::abs(m / t.mass.front() - 1.0));
    return d;
  };

  ModelSpec nls;
  nls.symbol = DispersionSymbol::schroedinger();
  nls.nonlinearity = Nonlinearity::power(1, NonlinSign::defocusing);
  RunConfig run;
  run.dt = 1e-3;
  run.T = 1.0;
  run.scheme = Scheme::strang;
  run.snapshot_stride = 1 << 20;
  const double nls_drift = drift_of(run_modulated(nls, path, u0, run));
  c.require(nls_drift <= 1e-10, "NLS mass drift " + fmt(nls_drift));

  ModelSpec wick = nls;
  wick.nonlinearity = Nonlinearity::wick(NonlinSign::defocusing);
  const double wick_drift = drift_of(run_modulated(wick, path, u0, run));
  c.require(wick_drift <= 1e-10, "Wick mass drift " + fmt(wick_drift));

  ModelSpec gkdv;
  gkdv.symbol = DispersionSymbol::airy();
  gkdv.nonlinearity = Nonlinearity::gkdv(NonlinSign::focusing);
  std::vector<std::complex<double>> samples(128);
  for (int j = 0; j < 128; ++j) {
    const double x = kTwoPi * j / 128 - std::numbers::pi;
    samples[static_cast<std::size_t>(j)] = 0.8 * std::exp(-2.0 * x * x);
  }
  const SpectralField g0 = from_physical(samples, 1, 128, kTwoPi, true);
  RunConfig grun;
  grun.dt = 1e-4;
  grun.T = 0.1;
  grun.scheme = Scheme::if_rk4;
  grun.snapshot_stride = 1 << 20;
  const double gkdv_drift =
      drift_of(run_modulated(gkdv, make_brownian_path(0.1, 1 << 12, 9), g0, grun));
  c.require(gkdv_drift <= 1e-6, "gKdV mass drift " + fmt(gkdv_drift));

  // Gauge equivalence at T = 0.5 on the identity path.
  const ModulationPath ident = make_identity_path(0.5, 8);
  RunConfig grun2;
  grun2.dt = 1e-3;
  grun2.T = 0.5;
  grun2.scheme = Scheme::strang;
  grun2.snapshot_stride = 1 << 20;
  const SpectralField up =
      run_modulated(nls, ident, u0, grun2).snapshots.back();
  SpectralField uw = run_modulated(wick, ident, u0, grun2).snapshots.back();
  const double mass = u0.l2_norm() * u0.l2_norm();
  const std::complex<double> gauge = std::polar(1.0, -2.0 * 0.5 * mass);
  double diff = 0;
  for (std::size_t i = 0; i < uw.coef.size(); ++i)
    diff += std::norm(uw.coef[i] / gauge - up.coef[i]);
  const double rel = std::sqrt(diff) / up.l2_norm();
  c.require(rel <= 1e-6, "gauge equivalence residual " + fmt(rel));
  c.note("drifts: nls " + fmt(nls_drift) + ", wick " + fmt(wick_drift) +
         ", gkdv " + fmt(gkdv_drift) + ", gauge " + fmt(rel));
  return c;
}

// 8. Blow-up contrast at the frozen reference configuration.
Check criterion_blowup_contrast() {
  Check c;
  auto cfg = inline_experiment("blowup-contrast",
                               "experiment = blowup-contrast\n"
                               "[contrast]\nn_modes = 512\namplitude = 2.4\n"
                               "width = 0.35\nT = 0.2\ndt = 2.5e-5\n"
                               "threshold = 10\nbrownian_seed = 42\n"
                               "path_n = 8192\nlinf_cap = 3.0\n",
                               "blowup");
  const ExperimentReport rep = run_experiment(cfg);
  for (const auto& v : rep.verdicts) {
    c.require(v.pass, v.name + " failed (value " + fmt(v.value) + ")");
    c.note(v.name + " value " + fmt(v.value));
  }
  return c;
}

// 9. V^2 dynamic programming against exhaustive enumeration.
Check criterion_vp_oracle() {
  Check c;
  double worst = 0;
  CounterRng rng(31, 0);
  for (uint64_t i = 0; i < 200; ++i) {
    const std::size_t pts =
        2 + static_cast<std::size_t>(rng.uniform(i) * 8.0);  // K <= 10
    const DiscretePath p = random_discrete_path(pts, 3, 1.0, 4000 + i);
    const double dp = vp_norm(p, 2.0);
    double brute = 0;
    const std::size_t interior = pts - 2;
    for (std::size_t mask = 0; mask < (std::size_t{1} << interior); ++mask) {
      double acc = 0;
      std::size_t prev = 0;
      for (std::size_t b = 0; b < interior; ++b)
        if (mask & (std::size_t{1} << b)) {
          acc += std::pow(vec_dist(p.values[b + 1], p.values[prev]), 2.0);
          prev = b + 1;
        }
      acc += std::pow(vec_dist(p.values[pts - 1], p.values[prev]), 2.0);
      brute = std::max(brute, acc);
    }
    worst = std::max(worst, std::abs(dp - std::sqrt(brute)));
  }
  c.require(worst <= 1e-12, "DP vs enumeration deviation " + fmt(worst));
  c.note("max deviation " + fmt(worst));
  return c;
}

// 10. Resonance suite.
Check criterion_resonance() {
  Check c;
  const FactorizationReport fact = cubic_factorization_check(64);
  c.require(fact.identity_violations == 0,
            std::to_string(fact.identity_violations) + " identity violations");
  c.require(fact.printed_factor_mismatches > 0,
            "printed-factor witness list is empty");
  c.note(std::to_string(fact.checked) + " quadruples, " +
         std::to_string(fact.printed_factor_mismatches) + " printed-factor mismatches");

  // Cauchy behaviour of the Wick weight sums: partial sums monotone at
  // every exponent, dyadic gaps shrinking where the tail decays visibly.
  for (double a : {1.1, 1.5, 2.0}) {
    c.require(wick_weight_sum(a, 512) <= wick_weight_sum(a, 1024),
              "partial sums not monotone at exponent " + fmt(a));
  }
  for (double a : {1.5, 2.0}) {
    const double g1 = wick_weight_sum(a, 512) - wick_weight_sum(a, 256);
    const double g2 = wick_weight_sum(a, 1024) - wick_weight_sum(a, 512);
    c.require(g2 >= 0 && g2 < g1, "gaps not shrinking at exponent " + fmt(a));
  }
  const double s10 = wick_weight_sum(2.0, 1 << 10);
  const double s11 = wick_weight_sum(2.0, 1 << 11);
  const double gap = s11 - s10;
  c.note("wick |S(2^11)-S(2^10)| = " + fmt(gap) + " absolute, " +
         fmt(gap / s11) + " relative");
  c.require(gap <= 1e-3,
            "|S(2^11)-S(2^10)| = " + fmt(gap) + " > 1e-3 (known-red check: "
            "the absolute tail of this series is ~6.4e-3 by construction; "
            "the relative gap " + fmt(gap / s11) + " is below 1e-3)");

  // Brute-force sums against an independent nested-loop oracle, N <= 4.
  double worst = 0;
  for (int N0 : {1, 2, 4})
    for (int N2 : {1, 2}) {
      RestrictionSumSpec spec;
      spec.constraint = LatticeConstraint::cubic(1);
      spec.block_sizes = {N0, N0, N2, N2};
      const double got = restriction_sum_bruteforce(spec);
      // Oracle: enumerate all four factors, check the constraint directly.
      std::map<long long, double> by_nu;
      const long long R = std::max(N0, N2);
      for (long long a = -R; a <= R; ++a)
        for (long long b = -R; b <= R; ++b)
          for (long long d = -R; d <= R; ++d) {
            const long long n0 = a - b + d;  // -n0 + a - b + d = 0
            if (!in_dyadic_annulus({a, 0}, 1, N0)) continue;
            if (!in_dyadic_annulus({b, 0}, 1, N2)) continue;
            if (!in_dyadic_annulus({d, 0}, 1, N2)) continue;
            if (!in_dyadic_annulus({n0, 0}, 1, N0)) continue;
            by_nu[-n0 * n0 + a * a - b * b + d * d] += 1.0;
          }
      double sup = 0;
      for (const auto& [nu, v] : by_nu) sup = std::max(sup, v);
      worst = std::max(worst, std::abs(got - sup));
    }
  c.require(worst <= 1e-12, "restriction sum vs oracle deviation " + fmt(worst));
  return c;
}

struct Criterion {
  int number;
  const char* title;
  std::function<Check()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "linear unitarity across dispersion symbols", criterion_unitarity},
      {2, "occupation time formula", criterion_occupation_formula},
      {3, "identity-path Fourier local time and rho(gamma)", criterion_identity_fourier},
      {4, "fBm irregularity at H = 1/2", criterion_fbm_irregularity},
      {5, "Strichartz transfer inequality", criterion_strichartz_transfer},
      {6, "C_W(T) vanishing contrast", criterion_cw_vanishing},
      {7, "mass conservation and gauge equivalence", criterion_conservation},
      {8, "blow-up contrast", criterion_blowup_contrast},
      {9, "V^2 dynamic programming oracle", criterion_vp_oracle},
      {10, "resonance suite", criterion_resonance},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& crit : criteria()) {
    if (only != 0 && crit.number != only) continue;
    Check result;
    std::string error;
    try {
      result = crit.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s%s%s\n", result.pass ? "PASS" : "FAIL",
                crit.number, crit.title, result.detail.empty() ? "" : " -- ",
                result.detail.c_str());
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
