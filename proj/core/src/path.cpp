#include "modlab/path.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "modlab/fft_internal.hpp"
#include "modlab/rng.hpp"

namespace modlab {

namespace {

std::vector<double> uniform_grid(double T, std::size_t n) {
  if (!(T > 0)) throw std::invalid_argument("path horizon must be positive");
  if (n < 1) throw std::invalid_argument("path needs at least one step");
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    t[k] = T * static_cast<double>(k) / static_cast<double>(n);
  t.back() = T;
  return t;
}

}  // namespace

void ModulationPath::validate() const {
  if (t_grid.size() < 2 || t_grid.size() != w_values.size())
    throw std::invalid_argument("path grid and values must match, length >= 2");
  if (t_grid.front() != 0.0)
    throw std::invalid_argument("path must start at t = 0");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1]))
      throw std::invalid_argument("path times must be strictly increasing");
  for (double w : w_values)
    if (!std::isfinite(w))
      throw std::invalid_argument("path values must be finite");
}

double ModulationPath::value(double t) const { return eval_path(*this, t); }

double ModulationPath::max_abs() const {
  double m = 0;
  for (double w : w_values) m = std::max(m, std::abs(w));
  return m;
}

double ModulationPath::min_value() const {
  return *std::min_element(w_values.begin(), w_values.end());
}

double ModulationPath::max_value() const {
  return *std::max_element(w_values.begin(), w_values.end());
}

double eval_path(const ModulationPath& path, double t) {
  const double T = path.horizon();
  const double tol = 1e-12 * std::max(1.0, T);
  if (t < -tol || t > T + tol)
    throw std::invalid_argument("eval_path: t outside [0, T]");
  t = std::clamp(t, 0.0, T);
  const auto& tg = path.t_grid;
  auto it = std::upper_bound(tg.begin(), tg.end(), t);
  std::size_t k = static_cast<std::size_t>(it - tg.begin());
  if (k == 0) return path.w_values.front();
  if (k == tg.size()) return path.w_values.back();
  const double t0 = tg[k - 1], t1 = tg[k];
  const double theta = (t - t0) / (t1 - t0);
  return path.w_values[k - 1] * (1.0 - theta) + path.w_values[k] * theta;
}

ModulationPath make_identity_path(double T, std::size_t n) {
  ModulationPath p;
  p.t_grid = uniform_grid(T, n);
  p.w_values = p.t_grid;
  p.kind = "identity";
  return p;
}

ModulationPath make_constant_path(double value, double T, std::size_t n) {
  ModulationPath p;
  p.t_grid = uniform_grid(T, n);
  p.w_values.assign(p.t_grid.size(), value);
  std::ostringstream tag;
  tag << "constant(" << value << ")";
  p.kind = tag.str();
  return p;
}

ModulationPath make_dispersion_managed_path(const RateTable& rates, double T,
                                            std::size_t n) {
  if (rates.empty())
    throw std::invalid_argument("dispersion-managed path: empty rate table");
  double period = 0;
  for (const auto& [rate, duration] : rates) {
    if (rate == 0.0)
      throw std::invalid_argument(
          "dispersion-managed path: zero rate violates nondegeneracy");
    if (!(duration > 0))
      throw std::invalid_argument(
          "dispersion-managed path: durations must be positive");
    period += duration;
  }

  ModulationPath p;
  p.t_grid = uniform_grid(T, n);
  const double dt = T / static_cast<double>(n);

  // Exact integral of the periodic piecewise-constant derivative.
  std::vector<double> break_t, break_w;  // within one period, cumulative
  break_t.push_back(0.0);
  break_w.push_back(0.0);
  for (const auto& [rate, duration] : rates) {
    break_t.push_back(break_t.back() + duration);
    break_w.push_back(break_w.back() + rate * duration);
  }
  const double w_period = break_w.back();

  auto integral = [&](double t) {
    const double cycles = std::floor(t / period * (1.0 + 1e-15));
    double rem = t - cycles * period;
    if (rem < 0) rem = 0;
    double w = cycles * w_period;
    for (std::size_t j = 1; j < break_t.size(); ++j) {
      const double seg = std::min(rem, break_t[j]) - break_t[j - 1];
      if (seg <= 0) break;
      w += rates[j - 1].first * seg;
    }
    return w;
  };

  // Every breakpoint inside [0, T] must coincide with a grid time.
  const double align_tol = 1e-9 * std::max(1.0, T);
  for (double t = 0; t <= T + align_tol; t += period) {
    for (std::size_t j = 1; j + 1 < break_t.size() + 1; ++j) {
      const double b = t + break_t[j];
      if (b > T + align_tol) break;
      const double nearest = std::round(b / dt) * dt;
      if (std::abs(nearest - b) > align_tol)
        throw std::invalid_argument(
            "dispersion-managed path: n too small to resolve breakpoints");
    }
    if (period <= 0) break;
  }

  p.w_values.resize(p.t_grid.size());
  for (std::size_t k = 0; k < p.t_grid.size(); ++k)
    p.w_values[k] = integral(p.t_grid[k]);
  std::ostringstream tag;
  tag << "dispersion-managed(";
  for (std::size_t j = 0; j < rates.size(); ++j)
    tag << (j ? "," : "") << rates[j].first << "x" << rates[j].second;
  tag << ")";
  p.kind = tag.str();
  return p;
}

ModulationPath make_brownian_path(double T, std::size_t n, uint64_t seed) {
  ModulationPath p;
  p.t_grid = uniform_grid(T, n);
  p.w_values.resize(n + 1);
  CounterRng rng(seed, /*stream=*/0);
  const double sd = std::sqrt(T / static_cast<double>(n));
  double w = 0;
  p.w_values[0] = 0;
  for (std::size_t k = 0; k < n; ++k) {
    w += sd * rng.normal(k);
    p.w_values[k + 1] = w;
  }
  std::ostringstream tag;
  tag << "brownian(seed=" << seed << ")";
  p.kind = tag.str();
  return p;
}

namespace {

// Stationary fBm increment autocovariance on a uniform grid of spacing dt.
double fbm_increment_cov(double hurst, double dt, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double h2 = 2.0 * hurst;
  return 0.5 * std::pow(dt, h2) *
         (std::pow(k + 1.0, h2) + std::pow(std::abs(k - 1.0), h2) -
          2.0 * std::pow(k, h2));
}

// Circulant embedding (Davies-Harte / Dietrich-Newsam): exact grid
// covariance when the embedding is nonnegative-definite.
bool fbm_increments_circulant(double hurst, double dt, std::size_t n,
                              const CounterRng& rng,
                              std::vector<double>& out) {
  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> c(m);
  for (std::size_t j = 0; j <= n; ++j) c[j] = fbm_increment_cov(hurst, dt, j);
  for (std::size_t j = 1; j < n; ++j) c[m - j] = c[j];

  std::vector<std::complex<double>> lambda = c;
  fft_inplace(lambda, /*inverse=*/false);

  double max_l = 0;
  for (const auto& l : lambda) max_l = std::max(max_l, std::abs(l.real()));
  for (auto& l : lambda) {
    if (l.real() < -1e-10 * max_l) return false;  // embedding failed
    l = std::complex<double>(std::max(l.real(), 0.0), 0.0);
  }

  // Hermitian-symmetric Gaussian spectrum -> real samples with the exact
  // circulant covariance. Normals are indexed so the draw is reproducible.
  std::vector<std::complex<double>> w(m);
  uint64_t idx = 0;
  auto next_normal = [&]() { return rng.normal(idx++); };
  w[0] = std::sqrt(lambda[0].real() / static_cast<double>(m)) * next_normal();
  w[n] = std::sqrt(lambda[n].real() / static_cast<double>(m)) * next_normal();
  for (std::size_t k = 1; k < n; ++k) {
    const double sd = std::sqrt(lambda[k].real() / (2.0 * static_cast<double>(m)));
    const double a = next_normal();
    const double b = next_normal();
    w[k] = std::complex<double>(sd * a, sd * b);
    w[m - k] = std::conj(w[k]);
  }
  fft_inplace(w, /*inverse=*/false);
  out.resize(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = w[j].real();
  return true;
}

void fbm_increments_cholesky(double hurst, double dt, std::size_t n,
                             const CounterRng& rng, std::vector<double>& out) {
  if (n > 4096)
    throw std::runtime_error(
        "fbm: circulant embedding failed and n is too large for the dense "
        "Cholesky fallback");
  std::vector<double> cov(n);
  for (std::size_t j = 0; j < n; ++j) cov[j] = fbm_increment_cov(hurst, dt, j);
  // Dense lower-triangular Cholesky of the Toeplitz covariance.
  std::vector<double> L(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = cov[i - j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (s <= 0) throw std::runtime_error("fbm: covariance not positive definite");
        L[i * n + j] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  }
  std::vector<double> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = rng.normal(k);
  out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t k = 0; k <= i; ++k) s += L[i * n + k] * z[k];
    out[i] = s;
  }
}

}  // namespace

ModulationPath make_fbm_path(double hurst, double T, std::size_t n,
                             uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("fbm: Hurst exponent must lie in (0,1)");
  ModulationPath p;
  p.t_grid = uniform_grid(T, n);
  const double dt = T / static_cast<double>(n);
  CounterRng rng(seed, /*stream=*/1);
  std::vector<double> inc;
  if (!fbm_increments_circulant(hurst, dt, n, rng, inc))
    fbm_increments_cholesky(hurst, dt, n, rng, inc);
  p.w_values.resize(n + 1);
  p.w_values[0] = 0;
  for (std::size_t k = 0; k < n; ++k) p.w_values[k + 1] = p.w_values[k] + inc[k];
  std::ostringstream tag;
  tag << "fbm(H=" << hurst << ",seed=" << seed << ")";
  p.kind = tag.str();
  return p;
}

ModulationPath load_path_csv(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open path file: " + filename);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty path file: " + filename);
  ModulationPath p;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double t, w;
    char comma;
    if (!(ss >> t >> comma >> w) || comma != ',')
      throw std::runtime_error(filename + ": malformed line " +
                               std::to_string(lineno));
    p.t_grid.push_back(t);
    p.w_values.push_back(w);
  }
  p.kind = "file(" + filename + ")";
  p.validate();
  return p;
}

void save_path_csv(const ModulationPath& path, const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot write path file: " + filename);
  out << "t,w\n";
  out.precision(17);
  for (std::size_t k = 0; k < path.t_grid.size(); ++k)
    out << path.t_grid[k] << "," << path.w_values[k] << "\n";
}

ModulationPath clip_path(const ModulationPath& path, double t_max) {
  if (!(t_max > 0) || t_max > path.horizon() * (1 + 1e-12))
    throw std::invalid_argument("clip_path: t_max outside (0, T]");
  t_max = std::min(t_max, path.horizon());
  ModulationPath out;
  out.kind = path.kind + "|clip(" + std::to_string(t_max) + ")";
  for (std::size_t k = 0; k < path.t_grid.size() && path.t_grid[k] < t_max; ++k) {
    out.t_grid.push_back(path.t_grid[k]);
    out.w_values.push_back(path.w_values[k]);
  }
  out.t_grid.push_back(t_max);
  out.w_values.push_back(path.value(t_max));
  return out;
}

ModulationPath gen_path(const PathSpec& spec) {
  if (spec.kind == "identity") return make_identity_path(spec.T, spec.n);
  if (spec.kind == "constant")
    return make_constant_path(spec.constant, spec.T, spec.n);
  if (spec.kind == "dispersion-managed")
    return make_dispersion_managed_path(spec.rates, spec.T, spec.n);
  if (spec.kind == "brownian")
    return make_brownian_path(spec.T, spec.n, spec.seed);
  if (spec.kind == "fbm")
    return make_fbm_path(spec.hurst, spec.T, spec.n, spec.seed);
  if (spec.kind == "file") return load_path_csv(spec.file);
  throw std::invalid_argument("unknown path kind: " + spec.kind);
}

}  // namespace modlab
