#include "wph/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wph {

namespace {

// FFTW plan creation is not thread-safe; execution on distinct plans is.
// Each thread keeps its own plans (with plan-owned aligned buffers), and only
// creation takes the global lock.
std::mutex plan_mutex;

struct Plan {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  std::size_t n = 0;

  Plan(const std::vector<std::size_t>& shape, int sign) {
    if (shape.size() != 1 && shape.size() != 2)
      throw std::invalid_argument("FFT supports 1D and 2D shapes only");
    n = 1;
    for (auto a : shape) n *= a;
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    std::lock_guard<std::mutex> lock(plan_mutex);
    if (shape.size() == 1) {
      plan = fftw_plan_dft_1d(static_cast<int>(shape[0]), in, out, sign, FFTW_ESTIMATE);
    } else {
      plan = fftw_plan_dft_2d(static_cast<int>(shape[0]), static_cast<int>(shape[1]), in, out,
                              sign, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("FFTW plan creation failed");
  }
  Plan(const Plan&) = delete;
  ~Plan() {
    if (plan) {
      std::lock_guard<std::mutex> lock(plan_mutex);
      fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
  }

  void run(const cplx* src, cplx* dst) {
    std::memcpy(in, src, n * sizeof(cplx));
    fftw_execute(plan);
    std::memcpy(dst, out, n * sizeof(cplx));
  }
};

Plan& cached_plan(const std::vector<std::size_t>& shape, int sign) {
  thread_local std::map<std::pair<std::vector<std::size_t>, int>, Plan> cache;
  auto key = std::make_pair(shape, sign);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.try_emplace(key, shape, sign).first;
  return it->second;
}

std::size_t total(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto a : shape) n *= a;
  return n;
}

}  // namespace

cvec fft(const cvec& x, const std::vector<std::size_t>& shape) {
  if (x.size() != total(shape)) throw std::invalid_argument("fft: size does not match shape");
  cvec out(x.size());
  cached_plan(shape, FFTW_FORWARD).run(x.data(), out.data());
  return out;
}

cvec ifft(const cvec& X, const std::vector<std::size_t>& shape) {
  if (X.size() != total(shape)) throw std::invalid_argument("ifft: size does not match shape");
  cvec out(X.size());
  cached_plan(shape, FFTW_BACKWARD).run(X.data(), out.data());
  double s = 1.0 / static_cast<double>(X.size());
  for (auto& v : out) v *= s;
  return out;
}

cvec fft_real(const std::vector<double>& x, const std::vector<std::size_t>& shape) {
  cvec tmp(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i];
  return fft(tmp, shape);
}

}  // namespace wph
