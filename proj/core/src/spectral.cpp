#include "modlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "modlab/fft_internal.hpp"
#include "modlab/rng.hpp"

namespace modlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double bracket(double x) { return std::sqrt(1.0 + x * x); }

}  // namespace

SpectralField SpectralField::zero(int dim, int n_modes, double box_length,
                                  bool real_valued) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("SpectralField: dim must be 1 or 2");
  if (!is_pow2(n_modes))
    throw std::invalid_argument("SpectralField: n_modes must be a power of two");
  if (!(box_length > 0))
    throw std::invalid_argument("SpectralField: box_length must be positive");
  SpectralField f;
  f.dim = dim;
  f.n_modes = n_modes;
  f.box_length = box_length;
  f.real_valued = real_valued;
  f.coef.assign(dim == 1 ? n_modes : static_cast<std::size_t>(n_modes) * n_modes,
                {0.0, 0.0});
  return f;
}

std::array<int, 2> SpectralField::modes_at(std::size_t flat) const {
  if (dim == 1) return {mode_of(static_cast<int>(flat)), 0};
  const int i = static_cast<int>(flat) / n_modes;
  const int j = static_cast<int>(flat) % n_modes;
  return {mode_of(i), mode_of(j)};
}

double SpectralField::xi_of(int mode) const {
  return 2.0 * std::numbers::pi * static_cast<double>(mode) / box_length;
}

double SpectralField::xi_norm_at(std::size_t flat) const {
  const auto m = modes_at(flat);
  const double x0 = xi_of(m[0]);
  const double x1 = dim == 2 ? xi_of(m[1]) : 0.0;
  return std::hypot(x0, x1);
}

std::complex<double>& SpectralField::at(int n0, int n1) {
  if (dim == 1) return coef[static_cast<std::size_t>(index_of(n0))];
  return coef[static_cast<std::size_t>(index_of(n0)) * n_modes + index_of(n1)];
}

const std::complex<double>& SpectralField::at(int n0, int n1) const {
  return const_cast<SpectralField*>(this)->at(n0, n1);
}

double SpectralField::l2_norm() const {
  double s = 0;
  for (const auto& c : coef) s += std::norm(c);
  return std::sqrt(s);
}

void SpectralField::enforce_real_symmetry() {
  if (!real_valued) return;
  const int half = n_modes / 2;
  auto fix_pair = [&](int n0, int n1) {
    auto& a = at(n0, n1);
    auto& b = at(-n0, -n1);
    const std::complex<double> avg = 0.5 * (a + std::conj(b));
    a = avg;
    b = std::conj(avg);
  };
  if (dim == 1) {
    at(-half) = 0.0;
    for (int n = 1; n < half; ++n) fix_pair(n, 0);
    at(0) = std::complex<double>(at(0).real(), 0.0);
  } else {
    for (int i = 0; i < n_modes; ++i) {
      at(-half, mode_of(i)) = 0.0;
      at(mode_of(i), -half) = 0.0;
    }
    for (int i = -half + 1; i < half; ++i)
      for (int j = -half + 1; j < half; ++j) {
        if (i < 0 || (i == 0 && j < 0)) continue;
        if (i == 0 && j == 0) {
          at(0, 0) = std::complex<double>(at(0, 0).real(), 0.0);
          continue;
        }
        fix_pair(i, j);
      }
  }
}

void SpectralField::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("field: bad dim");
  if (!is_pow2(n_modes)) throw std::invalid_argument("field: bad n_modes");
  const std::size_t expected =
      dim == 1 ? static_cast<std::size_t>(n_modes)
               : static_cast<std::size_t>(n_modes) * n_modes;
  if (coef.size() != expected)
    throw std::invalid_argument("field: coefficient size mismatch");
  for (const auto& c : coef)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("field: non-finite coefficient");
}

std::vector<std::complex<double>> to_physical(const SpectralField& field) {
  std::vector<std::complex<double>> samples = field.coef;
  if (field.dim == 1)
    fft_inplace(samples, /*inverse=*/true);
  else
    fft2_inplace(samples, field.n_modes, /*inverse=*/true);
  return samples;  // u(x_j) = sum_n c_n e^{2 pi i n j / N}
}

SpectralField from_physical(const std::vector<std::complex<double>>& samples,
                            int dim, int n_modes, double box_length,
                            bool real_valued) {
  SpectralField f = SpectralField::zero(dim, n_modes, box_length, real_valued);
  if (samples.size() != f.coef.size())
    throw std::invalid_argument("from_physical: sample count mismatch");
  f.coef = samples;
  if (dim == 1)
    fft_inplace(f.coef, /*inverse=*/false);
  else
    fft2_inplace(f.coef, n_modes, /*inverse=*/false);
  const double inv = 1.0 / static_cast<double>(f.coef.size());
  for (auto& c : f.coef) c *= inv;
  return f;
}

double DispersionSymbol::phase(const std::array<double, 2>& xi, int dim) const {
  const double mag = dim == 2 ? std::hypot(xi[0], xi[1]) : std::abs(xi[0]);
  switch (kind) {
    case Kind::schroedinger:
      return mag * mag;
    case Kind::airy:
      return xi[0] * xi[0] * xi[0];
    case Kind::fractional:
      return std::pow(mag, alpha);
  }
  return 0;
}

std::string DispersionSymbol::name() const {
  switch (kind) {
    case Kind::schroedinger:
      return "schroedinger";
    case Kind::airy:
      return "airy";
    case Kind::fractional: {
      std::ostringstream ss;
      ss << "fractional(" << alpha << ")";
      return ss.str();
    }
  }
  return "?";
}

DispersionSymbol DispersionSymbol::schroedinger() { return {Kind::schroedinger, 2.0}; }
DispersionSymbol DispersionSymbol::airy() { return {Kind::airy, 3.0}; }
DispersionSymbol DispersionSymbol::fractional(double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("fractional symbol: alpha > 0");
  return {Kind::fractional, alpha};
}

DispersionSymbol DispersionSymbol::parse(const std::string& name) {
  if (name == "schroedinger") return schroedinger();
  if (name == "airy") return airy();
  if (name.rfind("fractional(", 0) == 0 && name.back() == ')')
    return fractional(std::stod(name.substr(11, name.size() - 12)));
  throw std::invalid_argument("unknown dispersion symbol: " + name);
}

SpectralField propagate_linear(const SpectralField& field,
                               const DispersionSymbol& symbol, double dw) {
  if (symbol.kind == DispersionSymbol::Kind::airy && field.dim != 1)
    throw std::invalid_argument("airy symbol is one-dimensional");
  SpectralField out = field;
  for (std::size_t i = 0; i < out.coef.size(); ++i) {
    const auto m = out.modes_at(i);
    const std::array<double, 2> xi{out.xi_of(m[0]),
                                   out.dim == 2 ? out.xi_of(m[1]) : 0.0};
    out.coef[i] *= std::polar(1.0, symbol.phase(xi, out.dim) * dw);
  }
  return out;
}

double psi0(double x) {
  // Mollified plateau: 1 on [-1/2, 1/2], support in [-1, 1], C^inf.
  auto f = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = f(2.0 - 2.0 * std::abs(x));
  const double b = f(2.0 * std::abs(x) - 1.0);
  return a + b > 0 ? a / (a + b) : 0.0;
}

SpectralField dyadic_project(const SpectralField& field, int N,
                             ProjectorMode mode) {
  if (N < 1 || !is_pow2(N))
    throw std::invalid_argument("dyadic_project: N must be a dyadic integer");
  SpectralField out = field;
  const double Nd = static_cast<double>(N);
  for (std::size_t i = 0; i < out.coef.size(); ++i) {
    const double xi = out.xi_norm_at(i);
    double w = psi0(xi / Nd);
    if (mode == ProjectorMode::block && N >= 2) w -= psi0(2.0 * xi / Nd);
    out.coef[i] *= w;
  }
  return out;
}

double boundary_mass_fraction(const SpectralField& field) {
  const double xi_max =
      field.xi_of(field.n_modes / 2 - 1) * (field.dim == 2 ? std::sqrt(2.0) : 1.0);
  double outer = 0, total = 0;
  for (std::size_t i = 0; i < field.coef.size(); ++i) {
    const double m = std::norm(field.coef[i]);
    total += m;
    if (field.xi_norm_at(i) > 0.5 * xi_max) outer += m;
  }
  return total > 0 ? std::sqrt(outer / total) : 0.0;
}

SpectralField project_cube(const SpectralField& field,
                           const std::array<int, 2>& center_modes,
                           int half_side) {
  if (half_side < 0) throw std::invalid_argument("project_cube: half_side >= 0");
  SpectralField out = field;
  for (std::size_t i = 0; i < out.coef.size(); ++i) {
    const auto m = out.modes_at(i);
    const bool inside =
        std::abs(m[0] - center_modes[0]) <= half_side &&
        (out.dim == 1 || std::abs(m[1] - center_modes[1]) <= half_side);
    if (!inside) out.coef[i] = 0;
  }
  return out;
}

double norm_Lq(const SpectralField& field, double q) {
  if (!(q >= 1)) throw std::invalid_argument("norm_Lq: q >= 1 required");
  const auto samples = to_physical(field);
  if (q == kInf) {
    double m = 0;
    for (const auto& v : samples) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0;
  for (const auto& v : samples) s += std::pow(std::abs(v), q);
  return std::pow(s / static_cast<double>(samples.size()), 1.0 / q);
}

double norm_Hs(const SpectralField& field, double s) {
  double acc = 0;
  for (std::size_t i = 0; i < field.coef.size(); ++i)
    acc += std::pow(bracket(field.xi_norm_at(i)), 2.0 * s) * std::norm(field.coef[i]);
  return std::sqrt(acc);
}

double norm_FL(const SpectralField& field, double s, double r) {
  if (!(r >= 1)) throw std::invalid_argument("norm_FL: r >= 1 required");
  if (r == kInf) {
    double m = 0;
    for (std::size_t i = 0; i < field.coef.size(); ++i)
      m = std::max(m, std::pow(bracket(field.xi_norm_at(i)), s) *
                          std::abs(field.coef[i]));
    return m;
  }
  double acc = 0;
  for (std::size_t i = 0; i < field.coef.size(); ++i)
    acc += std::pow(std::pow(bracket(field.xi_norm_at(i)), s) *
                        std::abs(field.coef[i]),
                    r);
  return std::pow(acc, 1.0 / r);
}

double norm_besov(const SpectralField& field, double s, double p, double q) {
  // Dyadic blocks up to the first N with psi0(xi/N) = 1 on the whole grid.
  const double xi_max = field.xi_norm_at(0) + [&] {
    double m = 0;
    for (std::size_t i = 0; i < field.coef.size(); ++i)
      m = std::max(m, field.xi_norm_at(i));
    return m;
  }();
  int n_top = 1;
  while (static_cast<double>(n_top) < 2.0 * xi_max && n_top < (1 << 26)) n_top *= 2;
  double acc = 0, mx = 0;
  for (int N = 1; N <= n_top; N *= 2) {
    const SpectralField block = dyadic_project(field, N, ProjectorMode::block);
    const double bn = std::pow(static_cast<double>(N), s) * norm_Lq(block, p);
    if (q == kInf)
      mx = std::max(mx, bn);
    else
      acc += std::pow(bn, q);
  }
  return q == kInf ? mx : std::pow(acc, 1.0 / q);
}

double SpatialNorm::eval(const SpectralField& field) const {
  switch (kind) {
    case Kind::Lq:
      return norm_Lq(field, q);
    case Kind::Hs:
      return norm_Hs(field, s);
    case Kind::FLsr:
      return norm_FL(field, s, r);
    case Kind::Besov:
      return norm_besov(field, s, q, r);
  }
  throw std::invalid_argument("unsupported norm tag");
}

std::string SpatialNorm::name() const {
  std::ostringstream ss;
  switch (kind) {
    case Kind::Lq:
      ss << "L" << q;
      break;
    case Kind::Hs:
      ss << "H" << s;
      break;
    case Kind::FLsr:
      ss << "FL(" << s << "," << r << ")";
      break;
    case Kind::Besov:
      ss << "B(" << s << "," << q << "," << r << ")";
      break;
  }
  return ss.str();
}

SpatialNorm SpatialNorm::Lq_norm(double q) { return {Kind::Lq, q, 0, 2}; }
SpatialNorm SpatialNorm::Hs_norm(double s) { return {Kind::Hs, 2, s, 2}; }
SpatialNorm SpatialNorm::FL_norm(double s, double r) { return {Kind::FLsr, 2, s, r}; }
SpatialNorm SpatialNorm::Besov_norm(double s, double p, double q) {
  return {Kind::Besov, p, s, q};
}

namespace {

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "Inf") return kInf;
  return std::stod(text);
}

}  // namespace

SpatialNorm SpatialNorm::parse(const std::string& tag) {
  if (tag.empty()) throw std::invalid_argument("empty norm tag");
  try {
    if (tag[0] == 'L') return Lq_norm(parse_exponent(tag.substr(1)));
    if (tag[0] == 'H') return Hs_norm(std::stod(tag.substr(1)));
    if (tag.rfind("FL(", 0) == 0 && tag.back() == ')') {
      const std::string body = tag.substr(3, tag.size() - 4);
      const auto comma = body.find(',');
      return FL_norm(std::stod(body.substr(0, comma)),
                     parse_exponent(body.substr(comma + 1)));
    }
    if (tag.rfind("B(", 0) == 0 && tag.back() == ')') {
      std::string body = tag.substr(2, tag.size() - 3);
      const auto c1 = body.find(',');
      const auto c2 = body.find(',', c1 + 1);
      return Besov_norm(std::stod(body.substr(0, c1)),
                        parse_exponent(body.substr(c1 + 1, c2 - c1 - 1)),
                        parse_exponent(body.substr(c2 + 1)));
    }
  } catch (const std::invalid_argument&) {
  }
  throw std::invalid_argument("unsupported norm tag: " + tag);
}

double mixed_spacetime_norm(const std::vector<SpectralField>& series,
                            double dt, double p, const SpatialNorm& norm,
                            NormOrder order) {
  if (series.empty())
    throw std::invalid_argument("mixed_spacetime_norm: empty series");
  if (!(dt > 0) && series.size() > 1)
    throw std::invalid_argument("mixed_spacetime_norm: dt must be positive");
  if (!(p >= 1)) throw std::invalid_argument("mixed_spacetime_norm: p >= 1");
  for (const auto& f : series)
    if (f.dim != series[0].dim || f.n_modes != series[0].n_modes ||
        f.box_length != series[0].box_length)
      throw std::invalid_argument("mixed_spacetime_norm: mismatched grids");

  if (order == NormOrder::time_outside) {
    if (p == kInf) {
      double m = 0;
      for (const auto& f : series) m = std::max(m, norm.eval(f));
      return m;
    }
    double acc = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double w =
          (i == 0 || i + 1 == series.size()) && series.size() > 1 ? 0.5 : 1.0;
      acc += w * std::pow(norm.eval(series[i]), p) * dt;
    }
    return std::pow(acc, 1.0 / p);
  }

  // space_outside: pointwise-in-x L^p over time, then a spatial L^q norm.
  if (norm.kind != SpatialNorm::Kind::Lq)
    throw std::invalid_argument(
        "mixed_spacetime_norm: space_outside needs an Lq spatial norm");
  std::vector<std::vector<std::complex<double>>> phys;
  phys.reserve(series.size());
  for (const auto& f : series) phys.push_back(to_physical(f));
  const std::size_t n_points = phys[0].size();
  double acc = 0, mx = 0;
  for (std::size_t j = 0; j < n_points; ++j) {
    double v;
    if (p == kInf) {
      v = 0;
      for (const auto& snap : phys) v = std::max(v, std::abs(snap[j]));
    } else {
      double sum = 0;
      for (std::size_t i = 0; i < phys.size(); ++i) {
        const double w =
            (i == 0 || i + 1 == phys.size()) && phys.size() > 1 ? 0.5 : 1.0;
        sum += w * std::pow(std::abs(phys[i][j]), p) * dt;
      }
      v = std::pow(sum, 1.0 / p);
    }
    if (norm.q == kInf)
      mx = std::max(mx, v);
    else
      acc += std::pow(v, norm.q);
  }
  return norm.q == kInf ? mx : std::pow(acc / static_cast<double>(n_points), 1.0 / norm.q);
}

bool strichartz_admissible(double p, double q, int d) {
  if (!(p >= 2) || !(q >= 2)) return false;
  const double lhs = (p == kInf ? 0.0 : 2.0 / p) + (q == kInf ? 0.0 : static_cast<double>(d) / q);
  if (std::abs(lhs - 0.5 * d) > 1e-12) return false;
  if (d == 1) return true;                       // q in [2, inf]
  if (d == 2) return q != kInf;                  // q in [2, inf)
  return q < 2.0 * d / (d - 2.0) - 1e-12;        // d >= 3
}

SpectralField random_field(int dim, int n_modes, double box_length,
                           uint64_t seed, int max_mode, bool real_valued) {
  SpectralField f = SpectralField::zero(dim, n_modes, box_length, real_valued);
  CounterRng rng(seed, /*stream=*/2);
  uint64_t idx = 0;
  for (std::size_t i = 0; i < f.coef.size(); ++i) {
    const auto m = f.modes_at(i);
    if (std::abs(m[0]) > max_mode || std::abs(m[1]) > max_mode) {
      idx += 2;
      continue;
    }
    const double re = rng.normal(idx++);
    const double im = rng.normal(idx++);
    f.coef[i] = {re, im};
  }
  f.enforce_real_symmetry();
  const double nrm = f.l2_norm();
  if (nrm > 0)
    for (auto& c : f.coef) c /= nrm;
  return f;
}

SpectralField apply_bracket_weight(const SpectralField& field, double s) {
  SpectralField out = field;
  for (std::size_t i = 0; i < out.coef.size(); ++i)
    out.coef[i] *= std::pow(bracket(out.xi_norm_at(i)), s);
  return out;
}

SpectralField apply_homogeneous_weight(const SpectralField& field, double s) {
  SpectralField out = field;
  for (std::size_t i = 0; i < out.coef.size(); ++i) {
    const double xi = out.xi_norm_at(i);
    if (xi > 0) out.coef[i] *= std::pow(xi, s);
  }
  return out;
}

}  // namespace modlab
