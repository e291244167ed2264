#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "modlab/path.hpp"

namespace modlab {

// Binned density of the occupation measure: density(i,k) approximates
// d(mu_[0,t_i])/dz on bin k. Bins are uniform over the path range padded by
// two bins on each side, masses come from exact segment geometry, so
// dz * sum_k density(i,k) == t_i up to roundoff.
struct LocalTimeField {
  std::vector<double> t_grid;
  double z_lo = 0;
  double dz = 0;
  std::size_t n_bins = 0;
  std::vector<double> density;  // row-major [time][bin]

  double at(std::size_t i, std::size_t k) const { return density[i * n_bins + k]; }
  double bin_center(std::size_t k) const { return z_lo + (static_cast<double>(k) + 0.5) * dz; }
  double bin_left(std::size_t k) const { return z_lo + static_cast<double>(k) * dz; }
  double sup_at(std::size_t i) const;
  double mass_at(std::size_t i) const;  // dz * sum_k density
  // Minimum density over bins intersecting [a, b].
  double inf_on(std::size_t i, double a, double b) const;
};

// Leb{ s in [0,t] : W_s in [a,b] }, exact for the piecewise-linear
// interpolant.
double occupation_measure(const ModulationPath& path, double t, double a,
                          double b);

LocalTimeField local_time(const ModulationPath& path,
                          const std::vector<double>& t_grid,
                          std::size_t n_bins);

struct OccupationCheck {
  double lhs = 0;      // int_0^T F(W_t) dt, adaptive per-segment quadrature
  double rhs = 0;      // sum_k F(z_mid,k) * bin mass
  double rel_err = 0;
};

OccupationCheck check_occupation_formula(const ModulationPath& path,
                                         const std::function<double(double)>& F,
                                         double T, std::size_t n_bins,
                                         double quad_tol = 1e-12);

// t -> sup_z of the binned local-time density; nondecreasing in t.
std::vector<std::pair<double, double>> localtime_modulus(
    const ModulationPath& path, const std::vector<double>& t_grid,
    std::size_t n_bins);

// Phi_t(xi) = int_0^t e^{i xi W_s} ds, the Fourier transform of the local
// time, in closed form per linear segment.
std::complex<double> fourier_localtime(const ModulationPath& path, double t,
                                       double xi);
std::vector<std::complex<double>> fourier_localtime(
    const ModulationPath& path, double t, const std::vector<double>& xi_grid);

// Snapshots of Phi at several times in one sweep over the segments.
// times must be sorted ascending; result[i][j] = Phi_{times[i]}(xi_grid[j]).
std::vector<std::vector<std::complex<double>>> fourier_localtime_snapshots(
    const ModulationPath& path, const std::vector<double>& times,
    const std::vector<double>& xi_grid);

struct IrregularityEstimate {
  double gamma = 0;
  double rho_hat = 0;
  double constant = 0;
  // (xi, log envelope, fitted log value) for the frequencies used in the fit.
  struct Residual {
    double xi;
    double log_envelope;
    double log_fit;
  };
  std::vector<Residual> diagnostics;
};

// For each gamma, fit the Fourier decay exponent rho of the Hoelder-in-time
// envelope sup_{(s,t)} |Phi_t - Phi_s| / |t-s|^gamma by least squares on
// log<xi> over the largest frequency decade.
std::vector<IrregularityEstimate> estimate_irregularity(
    const ModulationPath& path, const std::vector<double>& gamma_grid,
    const std::vector<double>& xi_grid,
    const std::vector<std::pair<double, double>>& time_pairs);

}  // namespace modlab
