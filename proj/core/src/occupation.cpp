#include "modlab/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modlab {

namespace {

// Adaptive Simpson with absolute/relative tolerance. Exact on cubics, so
// polynomial test oracles come out to machine precision.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = b - a;
  const double whole = h / 6.0 * (fa + 4.0 * fm + fb);
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(b > a)) return 0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, tol, 28);
}

struct Segment {
  double t0, t1;  // clipped segment times
  double w0, w1;  // values at the clipped endpoints
};

// Iterate path segments clipped to [0, t_max].
template <typename Fn>
void for_segments(const ModulationPath& path, double t_max, Fn&& fn) {
  const auto& tg = path.t_grid;
  const auto& wv = path.w_values;
  for (std::size_t k = 0; k + 1 < tg.size(); ++k) {
    if (tg[k] >= t_max) break;
    Segment s{tg[k], tg[k + 1], wv[k], wv[k + 1]};
    if (s.t1 > t_max) {
      const double theta = (t_max - s.t0) / (s.t1 - s.t0);
      s.w1 = s.w0 + theta * (s.w1 - s.w0);
      s.t1 = t_max;
    }
    fn(s);
    if (s.t1 >= t_max) break;
  }
}

}  // namespace

double LocalTimeField::sup_at(std::size_t i) const {
  double m = 0;
  for (std::size_t k = 0; k < n_bins; ++k) m = std::max(m, at(i, k));
  return m;
}

double LocalTimeField::mass_at(std::size_t i) const {
  double s = 0;
  for (std::size_t k = 0; k < n_bins; ++k) s += at(i, k);
  return s * dz;
}

double LocalTimeField::inf_on(std::size_t i, double a, double b) const {
  double m = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < n_bins; ++k) {
    if (bin_left(k) + dz <= a || bin_left(k) >= b) continue;
    m = std::min(m, at(i, k));
    any = true;
  }
  return any ? m : 0.0;
}

double occupation_measure(const ModulationPath& path, double t, double a,
                          double b) {
  if (!(a < b)) throw std::invalid_argument("occupation_measure: need a < b");
  const double T = path.horizon();
  if (t < 0 || t > T * (1 + 1e-12))
    throw std::invalid_argument("occupation_measure: t outside [0, T]");
  t = std::min(t, T);

  double total = 0;
  for_segments(path, t, [&](const Segment& s) {
    const double dt = s.t1 - s.t0;
    if (s.w0 == s.w1) {
      if (s.w0 >= a && s.w0 <= b) total += dt;
      return;
    }
    const double slope = (s.w1 - s.w0) / dt;
    // Preimage of [a,b] under w0 + slope*(s - t0) is one closed interval.
    double sa = s.t0 + (a - s.w0) / slope;
    double sb = s.t0 + (b - s.w0) / slope;
    if (sa > sb) std::swap(sa, sb);
    const double lo = std::max(sa, s.t0);
    const double hi = std::min(sb, s.t1);
    if (hi > lo) total += hi - lo;
  });
  return total;
}

LocalTimeField local_time(const ModulationPath& path,
                          const std::vector<double>& t_grid,
                          std::size_t n_bins) {
  if (n_bins < 2) throw std::invalid_argument("local_time: n_bins >= 2");
  if (t_grid.empty()) throw std::invalid_argument("local_time: empty t_grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("local_time: t_grid must be increasing");
  if (t_grid.back() > path.horizon() * (1 + 1e-12))
    throw std::invalid_argument("local_time: t_grid exceeds path horizon");

  LocalTimeField field;
  field.t_grid = t_grid;
  field.n_bins = n_bins;

  const double w_min = path.min_value();
  const double w_max = path.max_value();
  double range = w_max - w_min;
  if (range <= 0) range = std::max(1.0, std::abs(w_min)) * 1e-6;
  // Pad by two bins on each side so no mass is clipped at the boundary.
  if (n_bins <= 4) {
    field.dz = range / static_cast<double>(n_bins);
    field.z_lo = w_min;
  } else {
    field.dz = range / static_cast<double>(n_bins - 4);
    field.z_lo = w_min - 2.0 * field.dz;
  }
  field.density.assign(t_grid.size() * n_bins, 0.0);

  std::vector<double> mass(n_bins, 0.0);
  auto bin_of = [&](double z) {
    auto k = static_cast<long>(std::floor((z - field.z_lo) / field.dz));
    return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(n_bins) - 1));
  };

  // Distribute each segment's time across the bins it sweeps, exactly.
  auto deposit = [&](const Segment& s) {
    const double dt = s.t1 - s.t0;
    if (dt <= 0) return;
    if (s.w0 == s.w1) {
      mass[bin_of(s.w0)] += dt;
      return;
    }
    const double zl = std::min(s.w0, s.w1);
    const double zh = std::max(s.w0, s.w1);
    const double inv_speed = dt / (zh - zl);
    std::size_t k0 = bin_of(zl), k1 = bin_of(zh);
    for (std::size_t k = k0; k <= k1; ++k) {
      const double lo = std::max(zl, field.bin_left(k));
      const double hi = std::min(zh, field.bin_left(k) + field.dz);
      if (hi > lo) mass[k] += (hi - lo) * inv_speed;
    }
  };

  std::size_t row = 0;
  double cursor = 0;
  const auto& tg = path.t_grid;
  const auto& wv = path.w_values;
  std::size_t seg = 0;
  while (row < t_grid.size()) {
    const double target = t_grid[row];
    while (cursor < target && seg + 1 < tg.size()) {
      Segment s{tg[seg], tg[seg + 1], wv[seg], wv[seg + 1]};
      if (s.t0 < cursor) {  // resume mid-segment
        const double theta = (cursor - s.t0) / (s.t1 - s.t0);
        s.w0 = s.w0 + theta * (s.w1 - s.w0);
        s.t0 = cursor;
      }
      if (s.t1 > target) {  // stop at the snapshot time
        const double theta = (target - s.t0) / (s.t1 - s.t0);
        s.w1 = s.w0 + theta * (s.w1 - s.w0);
        s.t1 = target;
        deposit(s);
        cursor = target;
        break;
      }
      deposit(s);
      cursor = s.t1;
      ++seg;
    }
    for (std::size_t k = 0; k < n_bins; ++k)
      field.density[row * n_bins + k] = mass[k] / field.dz;
    ++row;
  }
  return field;
}

OccupationCheck check_occupation_formula(
    const ModulationPath& path, const std::function<double(double)>& F,
    double T, std::size_t n_bins, double quad_tol) {
  auto checked_F = [&](double z) {
    const double v = F(z);
    if (std::isnan(v) || v < 0)
      throw std::invalid_argument(
          "check_occupation_formula: F must be nonnegative and finite");
    return v;
  };

  OccupationCheck out;
  const double tol = quad_tol * std::max(1.0, T);
  for_segments(path, T, [&](const Segment& s) {
    const double dt = s.t1 - s.t0;
    const double slope = (s.w1 - s.w0) / dt;
    auto integrand = [&](double t) { return checked_F(s.w0 + slope * (t - s.t0)); };
    out.lhs += integrate(integrand, s.t0, s.t1, tol * dt / T);
  });

  const LocalTimeField field = local_time(path, {T}, n_bins);
  for (std::size_t k = 0; k < n_bins; ++k)
    out.rhs += checked_F(field.bin_center(k)) * field.at(0, k) * field.dz;

  out.rel_err = std::abs(out.lhs - out.rhs) /
                std::max(std::abs(out.lhs), std::numeric_limits<double>::min());
  return out;
}

std::vector<std::pair<double, double>> localtime_modulus(
    const ModulationPath& path, const std::vector<double>& t_grid,
    std::size_t n_bins) {
  const LocalTimeField field = local_time(path, t_grid, n_bins);
  std::vector<std::pair<double, double>> out;
  out.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    out.emplace_back(t_grid[i], field.sup_at(i));
  return out;
}

namespace {

// (e^{i theta} - 1) / (i theta), with a series branch near zero. The
// switch threshold matches the documented |theta| < 1e-4.
std::complex<double> phase_ratio(double theta) {
  if (std::abs(theta) < 1e-4) {
    const std::complex<double> it(0.0, theta);
    std::complex<double> term(1.0, 0.0);
    std::complex<double> sum(1.0, 0.0);
    for (int k = 1; k <= 4; ++k) {
      term *= it / static_cast<double>(k + 1);
      sum += term;
    }
    return sum;
  }
  const std::complex<double> num = std::polar(1.0, theta) - 1.0;
  return num / std::complex<double>(0.0, theta);
}

}  // namespace

std::complex<double> fourier_localtime(const ModulationPath& path, double t,
                                       double xi) {
  std::complex<double> acc(0.0, 0.0);
  for_segments(path, t, [&](const Segment& s) {
    const double dt = s.t1 - s.t0;
    const double slope = (s.w1 - s.w0) / dt;
    acc += std::polar(dt, xi * s.w0) * phase_ratio(xi * slope * dt);
  });
  return acc;
}

std::vector<std::complex<double>> fourier_localtime(
    const ModulationPath& path, double t, const std::vector<double>& xi_grid) {
  std::vector<std::complex<double>> acc(xi_grid.size(), {0.0, 0.0});
  for_segments(path, t, [&](const Segment& s) {
    const double dt = s.t1 - s.t0;
    const double slope = (s.w1 - s.w0) / dt;
    for (std::size_t j = 0; j < xi_grid.size(); ++j)
      acc[j] += std::polar(dt, xi_grid[j] * s.w0) *
                phase_ratio(xi_grid[j] * slope * dt);
  });
  return acc;
}

std::vector<std::vector<std::complex<double>>> fourier_localtime_snapshots(
    const ModulationPath& path, const std::vector<double>& times,
    const std::vector<double>& xi_grid) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] >= times[i - 1]))
      throw std::invalid_argument("fourier_localtime_snapshots: times not sorted");
  std::vector<std::vector<std::complex<double>>> out(
      times.size(), std::vector<std::complex<double>>(xi_grid.size()));
  std::vector<std::complex<double>> acc(xi_grid.size(), {0.0, 0.0});

  const auto& tg = path.t_grid;
  const auto& wv = path.w_values;
  std::size_t seg = 0;
  double cursor = 0;
  double w_cursor = wv.empty() ? 0.0 : wv[0];

  auto add_segment = [&](double t0, double t1, double w0, double w1) {
    const double dt = t1 - t0;
    if (dt <= 0) return;
    const double slope = (w1 - w0) / dt;
    for (std::size_t j = 0; j < xi_grid.size(); ++j)
      acc[j] += std::polar(dt, xi_grid[j] * w0) * phase_ratio(xi_grid[j] * slope * dt);
  };

  for (std::size_t i = 0; i < times.size(); ++i) {
    const double target = std::min(times[i], path.horizon());
    while (cursor < target) {
      const double t1 = tg[seg + 1];
      const double w1 = wv[seg + 1];
      if (t1 <= target) {
        add_segment(cursor, t1, w_cursor, w1);
        cursor = t1;
        w_cursor = w1;
        ++seg;
      } else {
        const double theta = (target - tg[seg]) / (t1 - tg[seg]);
        const double w_t = wv[seg] + theta * (w1 - wv[seg]);
        add_segment(cursor, target, w_cursor, w_t);
        cursor = target;
        w_cursor = w_t;
      }
    }
    out[i] = acc;
  }
  return out;
}

std::vector<IrregularityEstimate> estimate_irregularity(
    const ModulationPath& path, const std::vector<double>& gamma_grid,
    const std::vector<double>& xi_grid,
    const std::vector<std::pair<double, double>>& time_pairs) {
  if (xi_grid.size() < 8)
    throw std::invalid_argument("estimate_irregularity: too few frequencies");
  for (double g : gamma_grid)
    if (g < 0 || g > 1)
      throw std::invalid_argument("estimate_irregularity: gamma outside [0,1]");
  double xi_min = std::numeric_limits<double>::infinity(), xi_max = 0;
  for (double xi : xi_grid) {
    if (!(xi > 0))
      throw std::invalid_argument("estimate_irregularity: frequencies must be positive");
    xi_min = std::min(xi_min, xi);
    xi_max = std::max(xi_max, xi);
  }
  if (xi_max / xi_min < 100.0)
    throw std::invalid_argument(
        "estimate_irregularity: frequency grid must span at least two decades");

  // Phi at every distinct pair endpoint, one sweep.
  std::vector<double> times;
  times.reserve(2 * time_pairs.size());
  for (const auto& [s, t] : time_pairs) {
    times.push_back(s);
    times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const auto snaps = fourier_localtime_snapshots(path, times, xi_grid);
  auto time_index = [&](double t) {
    return static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), t) - times.begin());
  };

  std::vector<IrregularityEstimate> out;
  for (double gamma : gamma_grid) {
    // Upper envelope over time pairs, matching the sup-norm definition.
    std::vector<double> env(xi_grid.size(), 0.0);
    for (const auto& [s, t] : time_pairs) {
      const auto& ps = snaps[time_index(s)];
      const auto& pt = snaps[time_index(t)];
      const double hol = std::pow(std::abs(t - s), gamma);
      for (std::size_t j = 0; j < xi_grid.size(); ++j)
        env[j] = std::max(env[j], std::abs(pt[j] - ps[j]) / hol);
    }

    // Least squares of log env against log<xi> over the top decade.
    IrregularityEstimate est;
    est.gamma = gamma;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < xi_grid.size(); ++j) {
      if (xi_grid[j] < xi_max / 10.0) continue;
      if (env[j] <= 0) continue;
      const double x = 0.5 * std::log1p(xi_grid[j] * xi_grid[j]);  // log<xi>
      const double y = std::log(env[j]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
      est.diagnostics.push_back({xi_grid[j], y, 0.0});
    }
    if (count < 8)
      throw std::invalid_argument(
          "estimate_irregularity: too few usable frequencies in the top decade");
    const double n = static_cast<double>(count);
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    est.rho_hat = -slope;
    est.constant = std::exp(intercept);
    for (auto& d : est.diagnostics) {
      const double x = 0.5 * std::log1p(d.xi * d.xi);
      d.log_fit = slope * x + intercept;
    }
    out.push_back(std::move(est));
  }
  return out;
}

}  // namespace modlab
