#pragma once

#include <string>
#include <vector>

#include "modlab/path.hpp"
#include "modlab/spectral.hpp"

namespace modlab {

enum class NonlinSign { focusing, defocusing };

struct Nonlinearity {
  enum class Kind { power_nls, wick_cubic, gkdv_quintic };
  Kind kind = Kind::power_nls;
  int m = 1;  // power NLS half-degree: |u|^{2m} u
  NonlinSign sign = NonlinSign::defocusing;

  static Nonlinearity power(int m, NonlinSign sign);
  static Nonlinearity wick(NonlinSign sign);
  static Nonlinearity gkdv(NonlinSign sign);
  std::string name() const;
};

struct ModelSpec {
  DispersionSymbol symbol;
  Nonlinearity nonlinearity;
  double dealias_fraction = 2.0 / 3.0;  // in (0, 1]

  void validate(const SpectralField& u0) const;
};

enum class Scheme { lie, strang, if_rk4 };

struct RunConfig {
  double dt = 1e-3;
  double T = 1.0;
  Scheme scheme = Scheme::strang;
  double blowup_threshold = 10.0;  // multiplier on initial L^inf and H^1
  int snapshot_stride = 1;
  bool adaptive = false;           // gKdV only: halve dt on mass drift
  double adaptive_tol = 1e-8;      // relative per-step drift trigger
};

struct Trajectory {
  enum class Status { completed, blowup, nan_detected };

  std::vector<double> times;  // per accepted step, starting at 0
  std::vector<double> mass;   // ||u||_{L^2}^2
  std::vector<double> h1;     // H^1 norm
  std::vector<double> linf;   // grid max of |u|
  std::vector<double> snapshot_times;
  std::vector<SpectralField> snapshots;
  Status status = Status::completed;
  double t_star = 0;          // halt time for blowup/nan
  double dt_used = 0;         // after snapping to the path grid
  std::string blowup_trigger; // "linf" or "h1" when status == blowup

  bool completed() const { return status == Status::completed; }
};

// Exact flow of the nonlinear sub-equation: a pointwise phase rotation for
// power NLS and Wick cubic (|u| is invariant, so mass is conserved exactly).
// Throws for gKdV, which has no exact nonlinear flow.
SpectralField nonlinear_step_exact(const SpectralField& field,
                                   const Nonlinearity& nonlinearity,
                                   double tau);

// Integrate the mild formulation along the path: linear sub-steps consume
// exact increments W_{t+dt} - W_t, never dW/dt.
Trajectory run_modulated(const ModelSpec& model, const ModulationPath& path,
                         const SpectralField& u0, const RunConfig& config);

// Space-time norm of a stride-1 trajectory (refuses coarser strides).
double strichartz_accumulate(const Trajectory& traj, double p,
                             const SpatialNorm& norm, NormOrder order);

}  // namespace modlab
