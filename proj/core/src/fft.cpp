#include "modlab/fft_internal.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace modlab {

namespace {

// The FFTW planner is not thread-safe; execution of a plan on its own
// buffers is. Plans are cached per thread and created under a global lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanKey {
  int n0, n1;  // n1 == 0 for 1d
  bool inverse;
  bool operator==(const PlanKey&) const = default;
};

struct PlanKeyHash {
  std::size_t operator()(const PlanKey& k) const {
    return std::hash<long long>()((static_cast<long long>(k.n0) << 24) ^
                                  (static_cast<long long>(k.n1) << 1) ^
                                  (k.inverse ? 1 : 0));
  }
};

struct CachedPlan {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  std::size_t size = 0;

  ~CachedPlan() {
    if (plan) fftw_destroy_plan(plan);
    if (buf) fftw_free(buf);
  }
};

CachedPlan& get_plan(int n0, int n1, bool inverse) {
  thread_local std::unordered_map<PlanKey, CachedPlan, PlanKeyHash> cache;
  PlanKey key{n0, n1, inverse};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::lock_guard<std::mutex> lock(planner_mutex());
  CachedPlan& entry = cache[key];
  entry.size = static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1);
  entry.buf = fftw_alloc_complex(entry.size);
  if (!entry.buf) throw std::bad_alloc();
  const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  // FFTW_ESTIMATE keeps planning deterministic run to run.
  if (n1 > 0)
    entry.plan = fftw_plan_dft_2d(n0, n1, entry.buf, entry.buf, sign, FFTW_ESTIMATE);
  else
    entry.plan = fftw_plan_dft_1d(n0, entry.buf, entry.buf, sign, FFTW_ESTIMATE);
  if (!entry.plan) throw std::runtime_error("fftw plan creation failed");
  return entry;
}

void run_plan(std::vector<std::complex<double>>& data, int n0, int n1,
              bool inverse) {
  CachedPlan& p = get_plan(n0, n1, inverse);
  if (data.size() != p.size) throw std::invalid_argument("fft: size mismatch");
  auto* buf = reinterpret_cast<std::complex<double>*>(p.buf);
  std::copy(data.begin(), data.end(), buf);
  fftw_execute(p.plan);
  std::copy(buf, buf + p.size, data.begin());
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  if (data.empty()) return;
  run_plan(data, static_cast<int>(data.size()), 0, inverse);
}

void fft2_inplace(std::vector<std::complex<double>>& data, int n, bool inverse) {
  if (data.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("fft2: size mismatch");
  run_plan(data, n, n, inverse);
}

}  // namespace modlab
