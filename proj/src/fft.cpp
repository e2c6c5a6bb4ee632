#include "nlszp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace nlszp {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per (dim, n, sign) with FFTW_ESTIMATE so that the
// chosen algorithm, and therefore every output bit, is reproducible.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& grid, int sign) {
    const auto key = std::make_tuple(grid.dim(), grid.n(), sign);
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const int dims[3] = {grid.n(), grid.n(), grid.n()};
    auto* a = fftw_alloc_complex(grid.size());
    auto* b = fftw_alloc_complex(grid.size());
    fftw_plan plan = fftw_plan_dft(grid.dim(), dims, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(const Grid& grid, int sign, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != grid.size() || out.size() != grid.size()) throw Error("transform buffer size mismatch");
  if (in.data() == out.data()) throw Error("transform buffers must not alias");
  fftw_plan plan = PlanCache::instance().get(grid, sign);
  // FFTW's new-array execute takes a non-const input pointer but does not
  // modify it for out-of-place complex transforms.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

}  // namespace

void forward_fft(const Grid& grid, std::span<const cplx> in, std::span<cplx> out) {
  execute(grid, FFTW_FORWARD, in, out);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= scale;
}

void inverse_fft(const Grid& grid, std::span<const cplx> in, std::span<cplx> out) {
  execute(grid, FFTW_BACKWARD, in, out);
}

Spectrum to_spectrum(const Field& f) {
  if (!f.all_finite()) throw Error("non-finite field");
  Spectrum s(f.grid());
  forward_fft(f.grid(), f.values(), s.coeffs());
  return s;
}

Field to_field(const Spectrum& s) {
  Field f(s.grid());
  inverse_fft(s.grid(), s.coeffs(), f.values());
  return f;
}

}  // namespace nlszp
