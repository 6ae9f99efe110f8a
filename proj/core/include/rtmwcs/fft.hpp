#pragma once

#include <complex>
#include <vector>

namespace rtmwcs {

using cplx = std::complex<double>;

/// Unnormalized forward DFT, X[k] = sum_n x[n] exp(-2*pi*i*k*n/N).
std::vector<cplx> fft(const std::vector<cplx>& x);
std::vector<cplx> fft(const std::vector<double>& x);

/// Inverse DFT with the 1/N factor, so ifft(fft(x)) == x.
std::vector<cplx> ifft(const std::vector<cplx>& x);

/// Real part of the inverse DFT.
std::vector<double> ifft_real(const std::vector<cplx>& x);

/// Signed bin index for an n-point DFT: k for k in [0, n/2), k-n above.
/// For even n the single bin at n/2 maps to -n/2; this is the convention
/// used everywhere a half-open frequency interval [-f/2, f/2) is meant.
inline long long signed_bin(long long k, long long n) {
  return (2 * k < n) ? k : k - n;
}

}  // namespace rtmwcs
