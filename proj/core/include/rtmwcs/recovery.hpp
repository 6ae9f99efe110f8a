#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rtmwcs/acquisition.hpp"
#include "rtmwcs/chips.hpp"
#include "rtmwcs/grid.hpp"

namespace rtmwcs {

/// Per-bin measurement vectors. Column j of z holds z(f_j) for the baseband
/// bin grid f_j in [-f_s/2, f_s/2), in DFT order: bin j has signed index
/// signed_bin(j, N/L) and frequency signed_bin(j, N/L) * f_s / (N/L).
struct SpectralSystem {
  Eigen::MatrixXcd z;  // M x (N/L)
  MeasurementMatrix phi;
  GridConfig grid;
};

/// Row m is the DFT of y_m dephased bin-wise by exp(-2*pi*i*f_j*tau_m*T),
/// the quantized-offset convention matching the exact sampling mode.
SpectralSystem build_spectral_system(const std::vector<Acquisition>& acqs,
                                     const MeasurementMatrix& phi,
                                     const GridConfig& grid);

/// Time-domain route to the trigger-aligned Nyquist-rate sequence: zero-stuff
/// by L, ideal-lowpass at f_s/2 with gain L, circular delay by tau. Kept as
/// the equivalence oracle for the frequency path: its N-point DFT equals
/// L * z on the baseband bins.
std::vector<double> align_upsample(const Acquisition& acq,
                                   const GridConfig& grid);

/// R = sum_j z(f_j) z(f_j)^H, Hermitian PSD. The time-domain Gram matrix of
/// the align_upsample outputs equals (L/periods) * R.
Eigen::MatrixXcd covariance(const SpectralSystem& sys);

/// Recovered slice index set, 1-based within {1..L}. With symmetric
/// selection the set is closed under l <-> L+1-l (slice L0+1 self-pairs).
struct SupportSet {
  std::vector<int> indices;  // sorted
  bool symmetric = false;

  bool contains(int slice) const;
  int size() const { return static_cast<int>(indices.size()); }
};

/// Simultaneous greedy pursuit on the eigen-frame of R: keep eigenpairs
/// with lambda >= eig_rel_tol * lambda_max, form V = Q * sqrt(Lambda), then
/// repeatedly add the Phi column (or mirror pair, in symmetric mode) whose
/// inclusion minimizes the projected frame residual, until the relative
/// residual drops to residual_tol or the support reaches max_bands, and
/// finish with swap-refinement passes that replace any selection a better
/// column can beat. Ties go to the lowest slice index. max_bands above M is
/// rejected (the least-squares stage would be underdetermined).
SupportSet somp_support(const Eigen::MatrixXcd& covariance,
                        const MeasurementMatrix& phi, int max_bands,
                        double residual_tol, bool symmetric = true,
                        double eig_rel_tol = 1e-6);

/// Per-bin least squares on the support: s_S(f_j) = pinv(Phi_S) z(f_j),
/// with a discrepancy-matched ridge (at the scale of the plain solution's
/// relative residual) so near-square supports cannot amplify model error
/// through small singular values. Rows outside the support are exactly
/// zero. Rank-deficient Phi_S throws.
Eigen::MatrixXcd recover_slices(const SpectralSystem& sys,
                                const SupportSet& support);

/// Slice decomposition of a Nyquist-grid record: S(l, j) = X[g]/L at global
/// bin g = (signed_bin(j) + (l - L0) * periods) mod N (rows 0-based; row l
/// is slice l+1). reconstruct_time inverts this exactly.
Eigen::MatrixXcd slice_spectra(const std::vector<double>& x,
                               const GridConfig& grid);

/// Reassemble the Nyquist spectrum from slice spectra (slice l placed at
/// offset (l - L0 - 1) * f_p), enforce conjugate symmetry, inverse FFT.
std::vector<double> reconstruct_time(const Eigen::MatrixXcd& slices,
                                     const GridConfig& grid);

struct RecoveryOptions {
  /// Slice budget for the pursuit; <= 0 means the M-2 fallback used when
  /// the band count is unknown.
  int max_bands = 0;
  double residual_tol = 1e-3;
  bool symmetric = true;
  double eig_rel_tol = 1e-6;
  double snr_edge_margin = 0.05;
};

struct RecoveryResult {
  SupportSet support;
  Eigen::MatrixXcd slices;     // L x (N/L), zero off-support
  std::vector<double> x_hat;   // length N
  std::optional<double> output_snr_db;  // set when a reference was given
  double residual_norm = 0.0;  // ||Z - Phi_S * S_S||_F / ||Z||_F
};

/// Full two-stage reconstruction: spectral system, covariance, support
/// pursuit, per-bin least squares, time-domain reassembly.
RecoveryResult reconstruct(const std::vector<Acquisition>& acqs,
                           const MeasurementMatrix& phi, const GridConfig& grid,
                           const RecoveryOptions& opts,
                           const std::vector<double>* reference = nullptr);

}  // namespace rtmwcs
