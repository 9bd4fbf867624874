#include "vortex/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace vortex::fft {
namespace {

// Timing-free planning; plans run on arbitrary Eigen buffers.
constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename Scalar>
struct Traits;

template <>
struct Traits<double> {
  using Plan = fftw_plan;
  using Complex = fftw_complex;
  static Plan make_r2c(int n) {
    std::vector<double> in(static_cast<size_t>(n) * n);
    auto* out = fftw_alloc_complex(static_cast<size_t>(n) * (n / 2 + 1));
    Plan p = fftw_plan_dft_r2c_2d(n, n, in.data(), out, kFlags);
    fftw_free(out);
    return p;
  }
  static Plan make_c2r(int n) {
    std::vector<double> out(static_cast<size_t>(n) * n);
    auto* in = fftw_alloc_complex(static_cast<size_t>(n) * (n / 2 + 1));
    Plan p = fftw_plan_dft_c2r_2d(n, n, in, out.data(), kFlags);
    fftw_free(in);
    return p;
  }
  static void destroy(Plan p) { fftw_destroy_plan(p); }
};

template <>
struct Traits<float> {
  using Plan = fftwf_plan;
  using Complex = fftwf_complex;
  static Plan make_r2c(int n) {
    std::vector<float> in(static_cast<size_t>(n) * n);
    auto* out = fftwf_alloc_complex(static_cast<size_t>(n) * (n / 2 + 1));
    Plan p = fftwf_plan_dft_r2c_2d(n, n, in.data(), out, kFlags);
    fftwf_free(out);
    return p;
  }
  static Plan make_c2r(int n) {
    std::vector<float> out(static_cast<size_t>(n) * n);
    auto* in = fftwf_alloc_complex(static_cast<size_t>(n) * (n / 2 + 1));
    Plan p = fftwf_plan_dft_c2r_2d(n, n, in, out.data(), kFlags);
    fftwf_free(in);
    return p;
  }
  static void destroy(Plan p) { fftwf_destroy_plan(p); }
};

template <typename Scalar>
struct PlanPair {
  typename Traits<Scalar>::Plan r2c;
  typename Traits<Scalar>::Plan c2r;
  ~PlanPair() {
    Traits<Scalar>::destroy(r2c);
    Traits<Scalar>::destroy(c2r);
  }
};

template <typename Scalar>
const PlanPair<Scalar>& plans(int n) {
  static std::map<int, std::unique_ptr<PlanPair<Scalar>>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<PlanPair<Scalar>>();
    slot->r2c = Traits<Scalar>::make_r2c(n);
    slot->c2r = Traits<Scalar>::make_c2r(n);
  }
  return *slot;
}

}  // namespace

void forward(int n, const double* in, std::complex<double>* out) {
  fftw_execute_dft_r2c(plans<double>(n).r2c, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void inverse(int n, std::complex<double>* in_destroyed, double* out) {
  fftw_execute_dft_c2r(plans<double>(n).c2r, reinterpret_cast<fftw_complex*>(in_destroyed), out);
}

void forward(int n, const float* in, std::complex<float>* out) {
  fftwf_execute_dft_r2c(plans<float>(n).r2c, const_cast<float*>(in),
                        reinterpret_cast<fftwf_complex*>(out));
}

void inverse(int n, std::complex<float>* in_destroyed, float* out) {
  fftwf_execute_dft_c2r(plans<float>(n).c2r, reinterpret_cast<fftwf_complex*>(in_destroyed), out);
}

}  // namespace vortex::fft
