#include "modlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "modlab/fft_internal.hpp"

namespace modlab {

namespace {

// Sign of the nonlinear phase rotation. With the linear multiplier
// e^{+i |xi|^2 dw}, the focusing branch of the power nonlinearity rotates
// with e^{-i tau |u|^{2m}} (the conjugate of the textbook convention).
double nls_rotation_sign(NonlinSign sign) {
  return sign == NonlinSign::focusing ? -1.0 : 1.0;
}

double gkdv_sign(NonlinSign sign) {
  return sign == NonlinSign::focusing ? 1.0 : -1.0;
}

double mass_of(const SpectralField& f) {
  double s = 0;
  for (const auto& c : f.coef) s += std::norm(c);
  return s;
}

double linf_of(const SpectralField& f) {
  double m = 0;
  for (const auto& v : to_physical(f)) m = std::max(m, std::abs(v));
  return m;
}

bool finite(const SpectralField& f) {
  for (const auto& c : f.coef)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

Nonlinearity Nonlinearity::power(int m, NonlinSign sign) {
  if (m < 1) throw std::invalid_argument("power nonlinearity: m >= 1");
  return {Kind::power_nls, m, sign};
}
Nonlinearity Nonlinearity::wick(NonlinSign sign) { return {Kind::wick_cubic, 1, sign}; }
Nonlinearity Nonlinearity::gkdv(NonlinSign sign) { return {Kind::gkdv_quintic, 2, sign}; }

std::string Nonlinearity::name() const {
  const std::string s = sign == NonlinSign::focusing ? "focusing" : "defocusing";
  switch (kind) {
    case Kind::power_nls:
      return "power_nls(m=" + std::to_string(m) + "," + s + ")";
    case Kind::wick_cubic:
      return "wick_cubic(" + s + ")";
    case Kind::gkdv_quintic:
      return "gkdv_quintic(" + s + ")";
  }
  return "?";
}

void ModelSpec::validate(const SpectralField& u0) const {
  u0.validate();
  if (!(dealias_fraction > 0 && dealias_fraction <= 1))
    throw std::invalid_argument("dealias_fraction must lie in (0, 1]");
  switch (nonlinearity.kind) {
    case Nonlinearity::Kind::power_nls:
      if (u0.real_valued)
        throw std::invalid_argument("power NLS uses complex fields");
      break;
    case Nonlinearity::Kind::wick_cubic:
      if (u0.real_valued)
        throw std::invalid_argument("Wick cubic uses complex fields");
      if (u0.dim != 1)
        throw std::invalid_argument("Wick cubic is one-dimensional");
      break;
    case Nonlinearity::Kind::gkdv_quintic:
      if (!u0.real_valued || u0.dim != 1)
        throw std::invalid_argument("gKdV uses real one-dimensional fields");
      break;
  }
}

SpectralField nonlinear_step_exact(const SpectralField& field,
                                   const Nonlinearity& nonlinearity,
                                   double tau) {
  if (nonlinearity.kind == Nonlinearity::Kind::gkdv_quintic)
    throw std::invalid_argument("gKdV nonlinearity has no exact flow");
  const double sigma = nls_rotation_sign(nonlinearity.sign);
  const double wick_shift =
      nonlinearity.kind == Nonlinearity::Kind::wick_cubic ? 2.0 * mass_of(field) : 0.0;
  const int power = nonlinearity.kind == Nonlinearity::Kind::wick_cubic
                        ? 1
                        : nonlinearity.m;

  auto samples = to_physical(field);
  for (auto& v : samples) {
    const double a2 = std::norm(v);
    double amp = 1.0;
    for (int j = 1; j < power; ++j) amp *= a2;
    amp *= a2;  // |u|^{2m}
    v *= std::polar(1.0, sigma * tau * (amp - wick_shift));
  }
  return from_physical(samples, field.dim, field.n_modes, field.box_length,
                       field.real_valued);
}

namespace {

// sigma/5 * d_x(u^5) for real 1d fields, evaluated on a 3x padded grid so
// degree-5 products do not alias, then masked by the 2/3-type rule.
SpectralField gkdv_nonlinear_term(const SpectralField& u, double sigma,
                                  double dealias_fraction) {
  const int n = u.n_modes;
  const int np = 3 * n;
  std::vector<std::complex<double>> padded(np, {0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    const int mode = u.mode_of(i);
    const int j = mode >= 0 ? mode : mode + np;
    padded[static_cast<std::size_t>(j)] = u.coef[static_cast<std::size_t>(i)];
  }
  fft_inplace(padded, /*inverse=*/true);
  for (auto& v : padded) {
    const double x = v.real();
    v = {x * x * x * x * x, 0.0};
  }
  fft_inplace(padded, /*inverse=*/false);
  const double inv_np = 1.0 / static_cast<double>(np);

  SpectralField out = SpectralField::zero(1, n, u.box_length, true);
  const double cutoff = dealias_fraction * static_cast<double>(n / 2);
  for (int i = 0; i < n; ++i) {
    const int mode = out.mode_of(i);
    if (std::abs(mode) > cutoff || mode == -n / 2) continue;
    const int j = mode >= 0 ? mode : mode + np;
    const double xi = out.xi_of(mode);
    out.coef[static_cast<std::size_t>(i)] =
        padded[static_cast<std::size_t>(j)] * inv_np *
        std::complex<double>(0.0, xi) * (sigma / 5.0);
  }
  return out;
}

struct Stepper {
  const ModelSpec& model;
  const ModulationPath& path;

  SpectralField nls_step(const SpectralField& u, double t, double dt,
                         Scheme scheme) const {
    const double dw = path.value(t + dt) - path.value(t);
    if (scheme == Scheme::strang) {
      SpectralField v = nonlinear_step_exact(u, model.nonlinearity, 0.5 * dt);
      v = propagate_linear(v, model.symbol, dw);
      return nonlinear_step_exact(v, model.nonlinearity, 0.5 * dt);
    }
    SpectralField v = nonlinear_step_exact(u, model.nonlinearity, dt);
    return propagate_linear(v, model.symbol, dw);
  }

  // Interaction picture v = e^{W_t L} u, i.e. v_hat = e^{-i phase W_t} u_hat.
  SpectralField gkdv_rhs(const SpectralField& v, double t) const {
    const double w = path.value(t);
    const SpectralField u = propagate_linear(v, model.symbol, w);
    const double sigma = gkdv_sign(model.nonlinearity.sign);
    SpectralField nl = gkdv_nonlinear_term(u, sigma, model.dealias_fraction);
    nl = propagate_linear(nl, model.symbol, -w);
    for (auto& c : nl.coef) c = -c;
    return nl;
  }

  SpectralField gkdv_step(const SpectralField& u, double t, double dt) const {
    const double w0 = path.value(t);
    SpectralField v = propagate_linear(u, model.symbol, -w0);
    const SpectralField k1 = gkdv_rhs(v, t);
    SpectralField v2 = v;
    for (std::size_t i = 0; i < v.coef.size(); ++i)
      v2.coef[i] = v.coef[i] + 0.5 * dt * k1.coef[i];
    const SpectralField k2 = gkdv_rhs(v2, t + 0.5 * dt);
    for (std::size_t i = 0; i < v.coef.size(); ++i)
      v2.coef[i] = v.coef[i] + 0.5 * dt * k2.coef[i];
    const SpectralField k3 = gkdv_rhs(v2, t + 0.5 * dt);
    for (std::size_t i = 0; i < v.coef.size(); ++i)
      v2.coef[i] = v.coef[i] + dt * k3.coef[i];
    const SpectralField k4 = gkdv_rhs(v2, t + dt);
    for (std::size_t i = 0; i < v.coef.size(); ++i)
      v.coef[i] += dt / 6.0 *
                   (k1.coef[i] + 2.0 * k2.coef[i] + 2.0 * k3.coef[i] + k4.coef[i]);
    SpectralField out = propagate_linear(v, model.symbol, path.value(t + dt));
    out.enforce_real_symmetry();
    return out;
  }
};

bool is_random_kind(const std::string& kind) {
  return kind.rfind("brownian", 0) == 0 || kind.rfind("fbm", 0) == 0;
}

}  // namespace

Trajectory run_modulated(const ModelSpec& model, const ModulationPath& path,
                         const SpectralField& u0, const RunConfig& config) {
  model.validate(u0);
  if (!(config.dt > 0)) throw std::invalid_argument("run: dt must be positive");
  if (!(config.blowup_threshold > 1))
    throw std::invalid_argument("run: blowup threshold must exceed 1");
  if (config.snapshot_stride < 1)
    throw std::invalid_argument("run: snapshot stride must be >= 1");
  if (path.horizon() < config.T * (1 - 1e-12))
    throw std::invalid_argument("run: path shorter than the horizon");

  const bool is_gkdv =
      model.nonlinearity.kind == Nonlinearity::Kind::gkdv_quintic;
  if (is_gkdv && config.scheme != Scheme::if_rk4)
    throw std::invalid_argument("run: gKdV requires the if_rk4 scheme");
  if (!is_gkdv && config.scheme == Scheme::if_rk4)
    throw std::invalid_argument("run: if_rk4 is the gKdV scheme");

  // Increments are read off the stored grid for random paths: snap dt to a
  // whole number of path cells that divides the horizon.
  double dt = config.dt;
  if (is_random_kind(path.kind)) {
    const double h = path.t_grid[1] - path.t_grid[0];
    const double cells_d = config.T / h;
    const auto cells = static_cast<long long>(std::llround(cells_d));
    if (cells >= 1 && std::abs(cells_d - static_cast<double>(cells)) < 1e-9) {
      auto m = static_cast<long long>(
          std::clamp(std::round(dt / h), 1.0, static_cast<double>(cells)));
      while (cells % m != 0) --m;
      dt = h * static_cast<double>(m);
    }
  }
  const auto n_steps = static_cast<std::size_t>(std::llround(config.T / dt));
  if (n_steps == 0 || std::abs(static_cast<double>(n_steps) * dt - config.T) >
                          1e-6 * config.T)
    throw std::invalid_argument("run: dt does not divide the horizon");

  // Large-box approximations of whole-space problems are under-resolved
  // once mass reaches the outermost dyadic block.
  if (boundary_mass_fraction(u0) > 1e-8)
    std::fprintf(stderr,
                 "modlab: warning: %.1e of the initial mass sits in the "
                 "outermost dyadic frequency block\n",
                 boundary_mass_fraction(u0));

  Trajectory traj;
  traj.dt_used = dt;
  Stepper stepper{model, path};

  SpectralField u = u0;
  const double mass0 = mass_of(u);
  const double h10 = norm_Hs(u, 1.0);
  const double linf0 = linf_of(u);

  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.mass.push_back(mass_of(u));
    traj.h1.push_back(norm_Hs(u, 1.0));
    traj.linf.push_back(linf_of(u));
  };
  auto snapshot = [&](double t) {
    traj.snapshot_times.push_back(t);
    traj.snapshots.push_back(u);
  };

  record(0.0);
  snapshot(0.0);

  double t = 0.0;
  std::size_t accepted = 0;
  double cur_dt = dt;
  while (t < config.T * (1 - 1e-12)) {
    cur_dt = std::min(cur_dt, config.T - t);
    SpectralField next = is_gkdv ? stepper.gkdv_step(u, t, cur_dt)
                                 : stepper.nls_step(u, t, cur_dt, config.scheme);

    if (!finite(next)) {
      traj.status = Trajectory::Status::nan_detected;
      traj.t_star = t + cur_dt;
      return traj;
    }
    if (is_gkdv && config.adaptive) {
      const double drift = std::abs(mass_of(next) / mass0 - 1.0);
      if (drift > config.adaptive_tol && cur_dt > dt * 1e-6) {
        cur_dt *= 0.5;
        continue;
      }
    }

    u = std::move(next);
    t += cur_dt;
    ++accepted;
    record(t);

    const double li = traj.linf.back();
    const double h1 = traj.h1.back();
    if (li > config.blowup_threshold * linf0 ||
        h1 > config.blowup_threshold * h10) {
      traj.status = Trajectory::Status::blowup;
      traj.t_star = t;
      traj.blowup_trigger = li > config.blowup_threshold * linf0 ? "linf" : "h1";
      snapshot(t);
      return traj;
    }
    if (accepted % static_cast<std::size_t>(config.snapshot_stride) == 0)
      snapshot(t);
  }
  if (traj.snapshot_times.back() != t) snapshot(t);
  traj.status = Trajectory::Status::completed;
  traj.t_star = t;
  return traj;
}

double strichartz_accumulate(const Trajectory& traj, double p,
                             const SpatialNorm& norm, NormOrder order) {
  if (traj.snapshots.size() < 2)
    throw std::invalid_argument("strichartz_accumulate: need >= 2 snapshots");
  const double dt = traj.snapshot_times[1] - traj.snapshot_times[0];
  for (std::size_t i = 1; i < traj.snapshot_times.size(); ++i) {
    const double step = traj.snapshot_times[i] - traj.snapshot_times[i - 1];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, dt) + 1e-12 ||
        std::abs(step - traj.dt_used) > 1e-9 * std::max(1.0, dt) + 1e-12)
      throw std::invalid_argument(
          "strichartz_accumulate: trajectory stride too coarse (need stride 1)");
  }
  return mixed_spacetime_norm(traj.snapshots, dt, p, norm, order);
}

}  // namespace modlab
