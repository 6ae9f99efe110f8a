#include "rtmwcs/chips.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rtmwcs/fft.hpp"
#include "rtmwcs/rng.hpp"

namespace rtmwcs {

namespace {

void validate_row(const Eigen::VectorXi& row) {
  if (row.size() < 1) throw std::invalid_argument("chip row is empty");
  for (Eigen::Index i = 0; i < row.size(); ++i)
    if (row[i] != 1 && row[i] != -1)
      throw std::invalid_argument("chip row entries must be +-1");
}

// sum_i a_i exp(-2*pi*i*order*i/L); depends on order only mod L.
cplx row_dft(const Eigen::VectorXi& row, long long order) {
  const auto L = static_cast<long long>(row.size());
  cplx acc(0.0, 0.0);
  for (long long i = 0; i < L; ++i) {
    const double phase =
        -2.0 * std::numbers::pi * static_cast<double>((order * i) % L) /
        static_cast<double>(L);
    acc += static_cast<double>(row[i]) * cplx(std::cos(phase), std::sin(phase));
  }
  return acc;
}

}  // namespace

ChipSet generate_chips(const GridConfig& grid, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("generate_chips: count must be >= 1");
  Rng rng(seed);
  Eigen::MatrixXi rows(count, grid.slices);
  for (int m = 0; m < count; ++m)
    for (int l = 0; l < grid.slices; ++l)
      rows(m, l) = (rng.raw() & 1ull) ? 1 : -1;
  return ChipSet{grid, std::move(rows), seed};
}

Eigen::VectorXcd fourier_coeffs(const Eigen::VectorXi& chip_row,
                                int max_order) {
  validate_row(chip_row);
  if (max_order < 0) throw std::invalid_argument("fourier_coeffs: bad order");
  const auto L = static_cast<double>(chip_row.size());
  Eigen::VectorXcd c(2 * max_order + 1);
  for (int l = -max_order; l <= max_order; ++l) {
    cplx d;
    if (l == 0) {
      d = cplx(1.0 / L, 0.0);
    } else {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(l);
      d = (cplx(1.0, 0.0) - std::exp(cplx(0.0, -th / L))) / cplx(0.0, th);
    }
    c[l + max_order] = d * row_dft(chip_row, l);
  }
  return c;
}

Eigen::VectorXcd grid_fourier_coeffs(const Eigen::VectorXi& chip_row) {
  validate_row(chip_row);
  if (chip_row.size() % 2 == 0)
    throw std::invalid_argument("grid_fourier_coeffs: row length must be odd");
  const auto L = static_cast<int>(chip_row.size());
  const int l0 = (L - 1) / 2;
  Eigen::VectorXcd c(L);
  for (int l = -l0; l <= l0; ++l)
    c[l + l0] = row_dft(chip_row, l) / static_cast<double>(L);
  return c;
}

MeasurementMatrix build_phi(const ChipSet& chips) {
  const int m_count = chips.count();
  const int L = chips.grid.slices;
  if (static_cast<int>(chips.rows.cols()) != L)
    throw std::invalid_argument("build_phi: chip row length != slice count");
  Eigen::MatrixXcd phi(m_count, L);
  for (int m = 0; m < m_count; ++m) {
    const Eigen::VectorXcd c = grid_fourier_coeffs(chips.rows.row(m));
    // column l' (0-based) carries order L0 - l', i.e. c reversed
    for (int col = 0; col < L; ++col) phi(m, col) = c[L - 1 - col];
  }
  return MeasurementMatrix{std::move(phi)};
}

void save_chips(const std::string& path, const ChipSet& chips) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_chips: cannot open " + path);
  for (int m = 0; m < chips.count(); ++m) {
    for (int l = 0; l < chips.grid.slices; ++l) {
      if (l) f << ' ';
      f << chips.rows(m, l);
    }
    f << '\n';
  }
}

ChipSet load_chips(const std::string& path, const GridConfig& grid) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_chips: cannot open " + path);
  std::vector<std::vector<int>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<int> row;
    int v = 0;
    while (ss >> v) {
      if (v != 1 && v != -1)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": chip values must be +-1");
      row.push_back(v);
    }
    if (row.empty()) continue;  // blank line
    if (static_cast<int>(row.size()) != grid.slices)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(grid.slices) +
                               " chips per row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no chip rows");
  Eigen::MatrixXi m(static_cast<int>(rows.size()), grid.slices);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < grid.slices; ++c) m(r, c) = rows[r][c];
  return ChipSet{grid, std::move(m), 0};
}

}  // namespace rtmwcs
