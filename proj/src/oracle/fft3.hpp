#pragma once

// Minimal owning wrapper around in-place complex 3D FFTW plans.

#include <complex>
#include <mutex>

#include <fftw3.h>

namespace localgap::oracle::detail {

class Fft3 {
 public:
  explicit Fft3(int n) : n_(n) {
    // Planning is not thread-safe in FFTW; execution is.
    static std::mutex planner;
    std::lock_guard<std::mutex> lock(planner);
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
  }
  ~Fft3() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  /// Unnormalized e^{-i...} transform, in place.
  void forward(std::complex<double>* data) const { fftw_execute_dft(fwd_, as_fftw(data), as_fftw(data)); }
  /// Unnormalized e^{+i...} transform, in place.
  void backward(std::complex<double>* data) const { fftw_execute_dft(bwd_, as_fftw(data), as_fftw(data)); }
  int n() const { return n_; }

 private:
  static fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
  int n_;
  fftw_plan fwd_{};
  fftw_plan bwd_{};
};

}  // namespace localgap::oracle::detail
