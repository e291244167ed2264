#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace modlab {

// Continuous modulation path W on [0,T], stored as a piecewise-linear
// interpolant on a strictly increasing time grid. Immutable after
// construction; all downstream occupation/Fourier integrals are computed
// exactly per linear segment.
struct ModulationPath {
  std::vector<double> t_grid;   // t_grid[0] == 0, strictly increasing
  std::vector<double> w_values; // same length, all finite
  std::string kind;             // generator tag, e.g. "fbm(H=0.7,seed=3)"

  double horizon() const { return t_grid.back(); }
  std::size_t segments() const { return t_grid.size() - 1; }

  double value(double t) const;
  double max_abs() const;
  double min_value() const;
  double max_value() const;

  // Throws std::invalid_argument if the invariants fail.
  void validate() const;
};

double eval_path(const ModulationPath& path, double t);

// (rate, duration) pairs forming one period of the piecewise-constant
// derivative; the table is repeated periodically up to T. Every breakpoint
// must land on the uniform grid, otherwise the interpolant would cut the
// corner ("n too small to resolve breakpoints").
using RateTable = std::vector<std::pair<double, double>>;

ModulationPath make_identity_path(double T, std::size_t n);
ModulationPath make_dispersion_managed_path(const RateTable& rates, double T,
                                            std::size_t n);
ModulationPath make_brownian_path(double T, std::size_t n, uint64_t seed);
ModulationPath make_fbm_path(double hurst, double T, std::size_t n,
                             uint64_t seed);
ModulationPath make_constant_path(double value, double T, std::size_t n);

// Two-column CSV "t,w" with header; the loader validates the invariants.
ModulationPath load_path_csv(const std::string& filename);
void save_path_csv(const ModulationPath& path, const std::string& filename);

// Config-level descriptor used by the experiment runner.
struct PathSpec {
  std::string kind = "identity"; // identity|dispersion-managed|brownian|fbm|file|constant
  double T = 1.0;
  std::size_t n = 1024;
  uint64_t seed = 0;
  double hurst = 0.5;
  double constant = 0.0;
  RateTable rates;
  std::string file;
};

ModulationPath gen_path(const PathSpec& spec);

// Restriction of the path to [0, t_max], interpolating a final grid point
// when t_max falls inside a segment.
ModulationPath clip_path(const ModulationPath& path, double t_max);

}  // namespace modlab
