#include "modlab/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modlab/rng.hpp"

namespace modlab {

void DiscretePath::validate() const {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument("discrete path: times/values mismatch");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw std::invalid_argument("discrete path: times must be increasing");
  if (!(t_end > times.back()))
    throw std::invalid_argument("discrete path: t_end must exceed last sample");
  const std::size_t d = values[0].size();
  for (const auto& v : values) {
    if (v.size() != d)
      throw std::invalid_argument("discrete path: inconsistent dimension");
    for (const auto& c : v)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("discrete path: non-finite value");
  }
}

DiscretePath DiscretePath::with_terminal_zero() const {
  DiscretePath out = *this;
  const double eps = (t_end - times.back()) * 0.5;
  out.times.push_back(t_end - eps);
  out.values.emplace_back(dim(), std::complex<double>{0.0, 0.0});
  return out;
}

double vec_norm(const std::vector<std::complex<double>>& v) {
  double s = 0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double vec_dist(const std::vector<std::complex<double>>& a,
                const std::vector<std::complex<double>>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double vp_norm(const DiscretePath& path, double p) {
  path.validate();
  if (!(p >= 1)) throw std::invalid_argument("vp_norm: p >= 1 required");
  const std::size_t K = path.points();
  if (K < 2) throw std::invalid_argument("vp_norm: need at least two samples");

  // best[j]: largest sum of p-th power increments over chains 0 -> j.
  std::vector<double> best(K, 0.0);
  for (std::size_t j = 1; j < K; ++j) {
    double b = 0;
    for (std::size_t i = 0; i < j; ++i) {
      const double cand =
          best[i] + std::pow(vec_dist(path.values[j], path.values[i]), p);
      b = std::max(b, cand);
    }
    best[j] = b;
  }
  return std::pow(best[K - 1], 1.0 / p);
}

AtomicDecomposition up_atomic_upper(const DiscretePath& path, double p) {
  path.validate();
  if (!(p >= 1)) throw std::invalid_argument("up_atomic_upper: p >= 1");
  if (vec_norm(path.values.front()) != 0.0)
    throw std::invalid_argument(
        "up_atomic_upper: path must vanish at the left endpoint");

  AtomicDecomposition out;
  for (std::size_t k = 1; k < path.points(); ++k) {
    std::vector<std::complex<double>> jump(path.dim());
    for (std::size_t i = 0; i < jump.size(); ++i)
      jump[i] = path.values[k][i] - path.values[k - 1][i];
    const double mag = vec_norm(jump);
    if (mag == 0) continue;
    for (auto& c : jump) c /= mag;
    out.atoms.push_back({path.times[k], mag, std::move(jump)});
    out.bound += mag;
  }
  return out;
}

namespace {

double pairing(const DiscretePath& f, const DiscretePath& v) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < f.points(); ++k) {
    const double t1 = k + 1 < f.points() ? f.times[k + 1] : f.t_end;
    const double dt = t1 - f.times[k];
    // v evaluated at the left edge of f's k-th step (both right-continuous).
    std::size_t j = 0;
    while (j + 1 < v.points() && v.times[j + 1] <= f.times[k] + 1e-15) ++j;
    for (std::size_t i = 0; i < f.values[k].size(); ++i)
      acc += f.values[k][i] * std::conj(v.values[j][i]) * dt;
  }
  return std::abs(acc);
}

void normalize_v2(DiscretePath& v) {
  const double n = vp_norm(v, 2.0);
  if (n > 0)
    for (auto& val : v.values)
      for (auto& c : val) c /= n;
}

}  // namespace

double duality_lower(const DiscretePath& f,
                     const std::vector<DiscretePath>& witnesses) {
  f.validate();
  double best = 0;
  for (const auto& v : witnesses) {
    v.validate();
    if (v.dim() != f.dim())
      throw std::invalid_argument("duality_lower: witness dimension mismatch");
    if (vp_norm(v, 2.0) > 1.0 + 1e-9)
      throw std::invalid_argument("duality_lower: witness not V^2-normalized");
    best = std::max(best, pairing(f, v));
  }
  return best;
}

std::vector<DiscretePath> make_duality_witnesses(const DiscretePath& f,
                                                 std::size_t count,
                                                 uint64_t seed) {
  f.validate();
  std::vector<DiscretePath> out;
  const std::size_t d = f.dim();

  // Constant witness aligned with the time integral of f.
  {
    std::vector<std::complex<double>> total(d, {0.0, 0.0});
    for (std::size_t k = 0; k < f.points(); ++k) {
      const double t1 = k + 1 < f.points() ? f.times[k + 1] : f.t_end;
      const double dt = t1 - f.times[k];
      for (std::size_t i = 0; i < d; ++i) total[i] += f.values[k][i] * dt;
    }
    const double mag = vec_norm(total);
    if (mag > 0) {
      DiscretePath w;
      w.t_end = f.t_end;
      w.times = {f.times.front()};
      for (auto& c : total) c /= mag;
      w.values = {total};
      w = w.with_terminal_zero();
      normalize_v2(w);
      out.push_back(std::move(w));
    }
  }

  // Greedy witness aligned with f step by step.
  {
    DiscretePath w;
    w.t_end = f.t_end;
    w.times = f.times;
    w.values = f.values;
    for (auto& val : w.values) {
      const double mag = vec_norm(val);
      if (mag > 0)
        for (auto& c : val) c /= mag;
    }
    w = w.with_terminal_zero();
    normalize_v2(w);
    if (vp_norm(w, 2.0) > 0) out.push_back(std::move(w));
  }

  CounterRng rng(seed, /*stream=*/3);
  uint64_t idx = 0;
  for (std::size_t j = 0; j < count; ++j) {
    DiscretePath w;
    w.t_end = f.t_end;
    w.times = f.times;
    w.values.resize(f.points());
    for (auto& val : w.values) {
      val.resize(d);
      for (auto& c : val) c = {rng.normal(idx++), rng.normal(idx++)};
    }
    w = w.with_terminal_zero();
    normalize_v2(w);
    if (vp_norm(w, 2.0) > 0) out.push_back(std::move(w));
  }
  return out;
}

DiscretePath primitive_path(const DiscretePath& f) {
  f.validate();
  DiscretePath out;
  out.t_end = f.t_end + (f.t_end - f.times.front());
  out.times = f.times;
  out.times.push_back(f.t_end);
  out.values.resize(f.points() + 1);
  std::vector<std::complex<double>> acc(f.dim(), {0.0, 0.0});
  out.values[0] = acc;  // vanishes at the left endpoint
  for (std::size_t k = 0; k < f.points(); ++k) {
    const double t1 = k + 1 < f.points() ? f.times[k + 1] : f.t_end;
    const double dt = t1 - f.times[k];
    for (std::size_t i = 0; i < f.dim(); ++i) acc[i] += f.values[k][i] * dt;
    out.values[k + 1] = acc;
  }
  return out;
}

DiscretePath random_discrete_path(std::size_t points, std::size_t dim,
                                  double t_end, uint64_t seed) {
  if (points < 2) throw std::invalid_argument("random path: need >= 2 points");
  DiscretePath p;
  p.t_end = t_end;
  CounterRng rng(seed, /*stream=*/4);
  uint64_t idx = 0;
  p.times.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    p.times[k] = t_end * (static_cast<double>(k) + 0.25 +
                          0.5 * rng.uniform(idx++)) /
                 static_cast<double>(points + 1);
  }
  std::sort(p.times.begin(), p.times.end());
  p.values.resize(points);
  for (auto& val : p.values) {
    val.resize(dim);
    for (auto& c : val) c = {rng.normal(idx++), rng.normal(idx++)};
  }
  return p;
}

}  // namespace modlab
