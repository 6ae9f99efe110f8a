#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "rtmwcs/grid.hpp"

namespace rtmwcs {

/// M pseudorandom +-1 chip sequences, one row per acquisition run.
/// Entries are i.i.d. symmetric Bernoulli given the seed.
struct ChipSet {
  GridConfig grid;
  Eigen::MatrixXi rows;  // M x L, entries in {+1, -1}
  std::uint64_t seed = 0;

  int count() const { return static_cast<int>(rows.rows()); }
};

ChipSet generate_chips(const GridConfig& grid, int count, std::uint64_t seed);

/// Fourier series coefficients of the continuous-time chip waveform (chip i
/// constant on [i*T, (i+1)*T), period L*T), for orders l in
/// [-max_order, max_order]; entry i holds order i - max_order. Closed form
/// of the per-chip integral: c_l = D(l) * sum_i a_i exp(-2*pi*i*l*i/L) with
/// D(0) = 1/L and D(l) = (1 - exp(-2*pi*i*l/L)) / (2*pi*i*l).
Eigen::VectorXcd fourier_coeffs(const Eigen::VectorXi& chip_row,
                                int max_order);

/// Fourier coefficients of the chip sequence as realized on the Nyquist
/// grid: the length-L DFT of the row scaled by 1/L, orders [-L0, L0].
/// These differ from fourier_coeffs because sampling the waveform at the
/// chip transitions folds every spectral replica; they are the coefficients
/// the grid modulation actually applies, so build_phi uses them.
Eigen::VectorXcd grid_fourier_coeffs(const Eigen::VectorXi& chip_row);

/// M x L system matrix tying slice spectra to run measurements,
/// z(f) = Phi * s(f). Column l' (1-based) holds the grid coefficient of
/// order L0+1-l'; the central column is c_0 = mean of the row.
struct MeasurementMatrix {
  Eigen::MatrixXcd entries;
};

MeasurementMatrix build_phi(const ChipSet& chips);

/// Plain-text chip matrix exchange (rows of +-1 separated by whitespace),
/// so externally captured sequences can be replayed.
void save_chips(const std::string& path, const ChipSet& chips);
ChipSet load_chips(const std::string& path, const GridConfig& grid);

}  // namespace rtmwcs
