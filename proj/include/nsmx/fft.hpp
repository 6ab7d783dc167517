// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_FFT_HPP
#define NSMX_FFT_HPP

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace nsmx::detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// One in-place c2c workspace per (thread, n). FFTW planning is serialized;
// execution on the private buffer is not.
class FftWorkspace {
public:
  explicit FftWorkspace(int n) : n_(n) {
    buf_ = fftw_alloc_complex(static_cast<size_t>(n) * n);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~FftWorkspace() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }

  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;

  // Unnormalized sum over e^{-ik.x}.
  void forward(std::complex<double>* data) { run(fwd_, data); }
  // Unnormalized sum over e^{+ik.x}.
  void backward(std::complex<double>* data) { run(bwd_, data); }

private:
  void run(fftw_plan p, std::complex<double>* data) {
    const size_t bytes = sizeof(fftw_complex) * static_cast<size_t>(n_) * n_;
    std::memcpy(buf_, data, bytes);
    fftw_execute(p);
    std::memcpy(data, buf_, bytes);
  }

  int n_;
  fftw_complex* buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

inline FftWorkspace& workspace_for(int n) {
  thread_local std::map<int, std::unique_ptr<FftWorkspace>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftWorkspace>(n);
  return *slot;
}

}  // namespace nsmx::detail

#endif
