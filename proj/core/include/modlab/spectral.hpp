#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace modlab {

// Periodic Fourier representation of u(t, .) on a box of side L in d = 1 or
// 2 dimensions. Coefficients live on the lattice {-N/2, ..., N/2-1}^d in FFT
// storage order; frequencies are xi_n = 2 pi n / L.
//
// Convention, used everywhere: all spatial L^q norms are taken with respect
// to the normalized box measure dx / L^d, and coefficients are true Fourier
// series coefficients (e^{i xi_n x} has unit coefficient). Parseval is then
// exact: ||u||_{L^2} equals the l^2 norm of the coefficients, and a single
// mode has FL^{s,r} norm <n>^s on any grid.
struct SpectralField {
  int dim = 1;            // 1 or 2
  int n_modes = 0;        // per dimension, power of two
  double box_length = 0;  // L > 0
  bool real_valued = false;
  std::vector<std::complex<double>> coef;

  static SpectralField zero(int dim, int n_modes, double box_length,
                            bool real_valued = false);

  std::size_t size() const { return coef.size(); }
  // FFT storage index -> signed mode number on one axis.
  int mode_of(int idx) const { return idx < n_modes / 2 ? idx : idx - n_modes; }
  int index_of(int mode) const { return mode >= 0 ? mode : mode + n_modes; }
  // Signed mode tuple of a flat index.
  std::array<int, 2> modes_at(std::size_t flat) const;
  double xi_of(int mode) const;
  // |xi| of a flat index.
  double xi_norm_at(std::size_t flat) const;

  std::complex<double>& at(int n0, int n1 = 0);
  const std::complex<double>& at(int n0, int n1 = 0) const;

  double l2_norm() const;
  // Projects onto the conjugate-symmetric subspace and zeroes the unpaired
  // Nyquist mode; no-op unless real_valued.
  void enforce_real_symmetry();
  void validate() const;
};

// Physical samples at x_j = j L / N (row-major for d = 2).
std::vector<std::complex<double>> to_physical(const SpectralField& field);
SpectralField from_physical(const std::vector<std::complex<double>>& samples,
                            int dim, int n_modes, double box_length,
                            bool real_valued = false);

// Skew-adjoint dispersion: the linear modulated flow multiplies mode n by
// e^{i phase(n) dw}.
struct DispersionSymbol {
  enum class Kind { schroedinger, airy, fractional };
  Kind kind = Kind::schroedinger;
  double alpha = 2.0;  // fractional only

  // xi is the signed frequency vector (second entry 0 in 1d).
  double phase(const std::array<double, 2>& xi, int dim) const;
  std::string name() const;

  static DispersionSymbol schroedinger();
  static DispersionSymbol airy();
  static DispersionSymbol fractional(double alpha);
  static DispersionSymbol parse(const std::string& name);
};

SpectralField propagate_linear(const SpectralField& field,
                               const DispersionSymbol& symbol, double dw);

enum class ProjectorMode { block, up_to };

// Smooth dyadic projectors built from a C^inf bump psi0 equal to 1 on
// [-1/2, 1/2] and supported in [-1, 1].
double psi0(double x);
SpectralField dyadic_project(const SpectralField& field, int N,
                             ProjectorMode mode);

// Fraction of mass (relative l^2) in the outermost dyadic block; used to
// warn when a large-box approximation of R^d is under-resolved.
double boundary_mass_fraction(const SpectralField& field);

// Sharp cube projector: keeps modes with max-norm distance <= half_side
// from the center (in mode units). Minimal companion to the lattice cube
// restrictions of the resonance sums.
SpectralField project_cube(const SpectralField& field,
                           const std::array<int, 2>& center_modes,
                           int half_side);

struct SpatialNorm {
  enum class Kind { Lq, Hs, FLsr, Besov };
  Kind kind = Kind::Lq;
  double q = 2;  // Lq exponent, or Besov inner L^p exponent
  double s = 0;  // regularity weight
  double r = 2;  // FL outer exponent, or Besov outer l^q exponent

  double eval(const SpectralField& field) const;
  std::string name() const;

  static SpatialNorm Lq_norm(double q);
  static SpatialNorm Hs_norm(double s);
  static SpatialNorm FL_norm(double s, double r);
  static SpatialNorm Besov_norm(double s, double p, double q);
  // "L4", "H1", "FL(0.5,inf)", "B(0,4,2)"
  static SpatialNorm parse(const std::string& tag);
};

double norm_Lq(const SpectralField& field, double q);
double norm_Hs(const SpectralField& field, double s);
double norm_FL(const SpectralField& field, double s, double r);
double norm_besov(const SpectralField& field, double s, double p, double q);

enum class NormOrder { time_outside, space_outside };

// time_outside: L^p in t (trapezoid on the uniform grid) of spatial norms.
// space_outside: spatial norm of pointwise-in-x L^p_t values (L^q_x L^p_T
// local-smoothing order); only Lq spatial norms are meaningful there.
double mixed_spacetime_norm(const std::vector<SpectralField>& series,
                            double dt, double p, const SpatialNorm& norm,
                            NormOrder order);

// 2/p + d/q = d/2 with the dimension-dependent range of q.
bool strichartz_admissible(double p, double q, int d);

// Random L^2-normalized field with coefficients supported on |mode| <= max_mode.
SpectralField random_field(int dim, int n_modes, double box_length,
                           uint64_t seed, int max_mode, bool real_valued = false);

// Multiplier helpers.
SpectralField apply_bracket_weight(const SpectralField& field, double s);  // <xi>^s
SpectralField apply_homogeneous_weight(const SpectralField& field, double s);  // |xi|^s, zero mode untouched

}  // namespace modlab
