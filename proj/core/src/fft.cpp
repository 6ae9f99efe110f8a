#include "rtmwcs/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace rtmwcs {

namespace {

// One cached FFTW plan per (size, direction). Plans are created with
// FFTW_UNALIGNED so fftw_execute_dft accepts whatever buffers callers hand
// in, and FFTW_ESTIMATE so planning is deterministic and cheap.
class PlanCache {
 public:
  fftw_plan get(int n, int sign) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(n) << 1) | (sign == FFTW_BACKWARD ? 1 : 0);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::uint64_t, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<cplx> transform(const std::vector<cplx>& x, int sign) {
  if (x.empty()) throw std::invalid_argument("fft: empty input");
  const int n = static_cast<int>(x.size());
  std::vector<cplx> in(x), out(n);
  fftw_execute_dft(cache().get(n, sign),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<cplx> fft(const std::vector<cplx>& x) {
  return transform(x, FFTW_FORWARD);
}

std::vector<cplx> fft(const std::vector<double>& x) {
  std::vector<cplx> xc(x.begin(), x.end());
  return transform(xc, FFTW_FORWARD);
}

std::vector<cplx> ifft(const std::vector<cplx>& x) {
  auto out = transform(x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> ifft_real(const std::vector<cplx>& x) {
  const auto out = ifft(x);
  std::vector<double> r(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) r[i] = out[i].real();
  return r;
}

}  // namespace rtmwcs
