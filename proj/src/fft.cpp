#include "chq/fft.hpp"

#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <fftw3.h>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "chq/kernels.hpp"

namespace chq::fft {
namespace {

enum class Kind { kForward, kBackward, kAxisForward, kAxisBackward, kR2C, kC2R };

using Key = std::tuple<int, int, int>;

unsigned planner_flags() {
  const char* env = std::getenv("CHQ_FFTW_PLAN");
  // Measured plans are faster but depend on timings, so results may differ
  // in the last digits between runs.
  if (env != nullptr && std::strcmp(env, "measure") == 0) return FFTW_MEASURE;
  return FFTW_ESTIMATE;
}

class PlanCache {
 public:
  PlanCache() {
    fftw_init_threads();
    nthreads_ = kernels::thread_count();
    fftw_plan_with_nthreads(nthreads_);
    flags_ = planner_flags();
  }
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, int n, int axis) {
    std::lock_guard<std::mutex> lock(mu_);
    const Key key{int(kind), n, axis};
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_plan plan = make(kind, n, axis);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  int threads() const { return nthreads_; }

 private:
  fftw_plan make(Kind kind, int n, int axis) {
    const std::size_t nn = std::size_t(n);
    const std::size_t total = nn * nn * nn;
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::kForward:
      case Kind::kBackward: {
        auto* buf = fftw_alloc_complex(total);
        plan = fftw_plan_dft_3d(n, n, n, buf, buf,
                                kind == Kind::kForward ? FFTW_FORWARD
                                                       : FFTW_BACKWARD,
                                flags_);
        fftw_free(buf);
        break;
      }
      case Kind::kAxisForward:
      case Kind::kAxisBackward: {
        auto* buf = fftw_alloc_complex(total);
        const int stride[3] = {n * n, n, 1};
        fftw_iodim dim{n, stride[axis], stride[axis]};
        fftw_iodim loops[2];
        int l = 0;
        for (int a = 0; a < 3; ++a) {
          if (a == axis) continue;
          loops[l++] = fftw_iodim{n, stride[a], stride[a]};
        }
        plan = fftw_plan_guru_dft(1, &dim, 2, loops, buf, buf,
                                  kind == Kind::kAxisForward ? FFTW_FORWARD
                                                             : FFTW_BACKWARD,
                                  flags_);
        fftw_free(buf);
        break;
      }
      case Kind::kR2C: {
        const std::size_t half = nn * nn * (nn / 2 + 1);
        auto* in = fftw_alloc_real(total);
        auto* out = fftw_alloc_complex(half);
        plan = fftw_plan_dft_r2c_3d(n, n, n, in, out, flags_);
        fftw_free(in);
        fftw_free(out);
        break;
      }
      case Kind::kC2R: {
        const std::size_t half = nn * nn * (nn / 2 + 1);
        auto* in = fftw_alloc_complex(half);
        auto* out = fftw_alloc_real(total);
        plan = fftw_plan_dft_c2r_3d(n, n, n, in, out, flags_);
        fftw_free(in);
        fftw_free(out);
        break;
      }
    }
    return plan;
  }

  std::mutex mu_;
  std::map<Key, fftw_plan> plans_;
  int nthreads_ = 1;
  unsigned flags_ = FFTW_ESTIMATE;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void forward(cplx* data, int n) {
  fftw_execute_dft(cache().get(Kind::kForward, n, 0), as_fftw(data),
                   as_fftw(data));
}

void backward(cplx* data, int n) {
  fftw_execute_dft(cache().get(Kind::kBackward, n, 0), as_fftw(data),
                   as_fftw(data));
}

void forward_axis(cplx* data, int n, int axis) {
  fftw_execute_dft(cache().get(Kind::kAxisForward, n, axis), as_fftw(data),
                   as_fftw(data));
}

void backward_axis(cplx* data, int n, int axis) {
  fftw_execute_dft(cache().get(Kind::kAxisBackward, n, axis), as_fftw(data),
                   as_fftw(data));
}

void r2c(double* in, cplx* out, int m) {
  fftw_execute_dft_r2c(cache().get(Kind::kR2C, m, 0), in, as_fftw(out));
}

void c2r(cplx* in, double* out, int m) {
  fftw_execute_dft_c2r(cache().get(Kind::kC2R, m, 0), as_fftw(in), out);
}

int threads() { return cache().threads(); }

}  // namespace chq::fft

namespace chq::kernels {

int thread_count() {
  static const int count = [] {
    int t = 1;
#ifdef _OPENMP
    t = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("CHQ_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) t = v;
    }
#ifdef _OPENMP
    omp_set_num_threads(t);
#endif
    return t;
  }();
  return count;
}

}  // namespace chq::kernels
