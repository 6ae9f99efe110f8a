#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rtmwcs/chips.hpp"
#include "test_util.hpp"

using namespace rtmwcs;

namespace {
const GridConfig kDesk(2.5e9, 197, 512);
const GridConfig kTiny(1.0, 17, 8);
}  // namespace

TEST_CASE("generate_chips: shape, alphabet, determinism") {
  const auto a = generate_chips(kDesk, 100, 42);
  CHECK(a.rows.rows() == 100);
  CHECK(a.rows.cols() == 197);
  for (int m = 0; m < a.count(); ++m)
    for (int l = 0; l < 197; ++l)
      CHECK((a.rows(m, l) == 1 || a.rows(m, l) == -1));

  const auto b = generate_chips(kDesk, 100, 42);
  CHECK(a.rows == b.rows);
  const auto c = generate_chips(kDesk, 100, 43);
  CHECK(a.rows != c.rows);

  // empirical mean of the 19700 entries stays near zero
  double mean = 0.0;
  for (int m = 0; m < a.count(); ++m)
    for (int l = 0; l < 197; ++l) mean += a.rows(m, l);
  mean /= 100.0 * 197.0;
  CHECK(std::abs(mean) <= 0.2);
}

TEST_CASE("generate_chips: rows extend prefix-wise with the count") {
  const auto small = generate_chips(kDesk, 5, 9);
  const auto large = generate_chips(kDesk, 12, 9);
  CHECK(large.rows.topRows(5) == small.rows);
}

TEST_CASE("generate_chips: single chip, and bad counts") {
  const GridConfig one(1.0, 1, 4);
  const auto c = generate_chips(one, 1, 0);
  CHECK((c.rows(0, 0) == 1 || c.rows(0, 0) == -1));
  CHECK_THROWS_AS(generate_chips(one, 0, 0), std::invalid_argument);
}

TEST_CASE("fourier_coeffs: the all-ones waveform is pure DC") {
  Eigen::VectorXi row = Eigen::VectorXi::Constant(17, 1);
  const auto c = fourier_coeffs(row, 8);
  CHECK(std::abs(c[8] - cplx(1.0, 0.0)) <= 1e-14);
  for (int i = 0; i < 17; ++i)
    if (i != 8) CHECK(std::abs(c[i]) <= 1e-14);
}

TEST_CASE("fourier_coeffs: length-one sequences") {
  Eigen::VectorXi row(1);
  row[0] = -1;
  const auto c = fourier_coeffs(row, 0);
  CHECK(c.size() == 1);
  CHECK(std::abs(c[0] - cplx(-1.0, 0.0)) <= 1e-15);
}

TEST_CASE("fourier_coeffs: matches chip-wise quadrature of the waveform "
          "integral") {
  Rng rng(2024);
  const auto row = testutil::random_chip_row(17, rng);
  const auto c = fourier_coeffs(row, 8);
  for (int l = -8; l <= 8; ++l) {
    const cplx ref = testutil::fourier_coeff_quadrature(row, l);
    CHECK(std::abs(c[l + 8] - ref) <= 1e-9);
  }
}

TEST_CASE("fourier_coeffs: conjugate symmetry and truncated energy") {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const auto row = testutil::random_chip_row(17, rng);
    const auto c = fourier_coeffs(row, 17 * 2);
    const int mid = 17 * 2;
    for (int l = 1; l <= mid; ++l)
      CHECK(std::abs(c[mid - l] - std::conj(c[mid + l])) <= 1e-12);

    // energy below the waveform's unit power, monotone in the range
    double prev = 0.0;
    for (int range : {8, 17, 34}) {
      const auto cc = fourier_coeffs(row, range);
      double energy = 0.0;
      for (int i = 0; i < cc.size(); ++i) energy += std::norm(cc[i]);
      CHECK(energy <= 1.0 + 1e-12);
      CHECK(energy >= prev - 1e-12);
      prev = energy;
    }
  }
}

TEST_CASE("grid_fourier_coeffs: DC term, symmetry, unit energy") {
  Rng rng(5);
  const auto row = testutil::random_chip_row(17, rng);
  const auto c = grid_fourier_coeffs(row);
  CHECK(c.size() == 17);
  const double mean = static_cast<double>(row.sum()) / 17.0;
  CHECK(std::abs(c[8] - cplx(mean, 0.0)) <= 1e-14);
  for (int l = 1; l <= 8; ++l)
    CHECK(std::abs(c[8 - l] - std::conj(c[8 + l])) <= 1e-12);
  // the sampled sequence captures the full unit power exactly
  double energy = 0.0;
  for (int i = 0; i < 17; ++i) energy += std::norm(c[i]);
  CHECK(energy == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_phi: all-ones chips give central indicator rows") {
  ChipSet chips{kTiny, Eigen::MatrixXi::Constant(3, 17, 1), 0};
  const auto phi = build_phi(chips);
  for (int m = 0; m < 3; ++m)
    for (int col = 0; col < 17; ++col) {
      const cplx want = (col == 8) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      CHECK(std::abs(phi.entries(m, col) - want) <= 1e-14);
    }
}

TEST_CASE("build_phi: L=1 reduces to the chip sign") {
  const GridConfig one(1.0, 1, 4);
  Eigen::MatrixXi rows(2, 1);
  rows << 1, -1;
  const auto phi = build_phi(ChipSet{one, rows, 0});
  CHECK(std::abs(phi.entries(0, 0) - cplx(1.0, 0.0)) <= 1e-15);
  CHECK(std::abs(phi.entries(1, 0) - cplx(-1.0, 0.0)) <= 1e-15);
}

TEST_CASE("build_phi: central column is the chip mean; row-wise concatenation") {
  const auto a = generate_chips(kTiny, 3, 1);
  const auto b = generate_chips(kTiny, 2, 2);
  const auto pa = build_phi(a);
  const auto pb = build_phi(b);
  for (int m = 0; m < 3; ++m) {
    const double mean = static_cast<double>(a.rows.row(m).sum()) / 17.0;
    CHECK(std::abs(pa.entries(m, 8) - cplx(mean, 0.0)) <= 1e-14);
  }

  Eigen::MatrixXi stacked(5, 17);
  stacked << a.rows, b.rows;
  const auto pc = build_phi(ChipSet{kTiny, stacked, 0});
  CHECK((pc.entries.topRows(3) - pa.entries).norm() == 0.0);
  CHECK((pc.entries.bottomRows(2) - pb.entries).norm() == 0.0);
}

TEST_CASE("chip text round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "rtmwcs_chiptest";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "chips.txt").string();
  const auto chips = generate_chips(kTiny, 4, 77);
  save_chips(path, chips);
  const auto loaded = load_chips(path, kTiny);
  CHECK(loaded.rows == chips.rows);
  CHECK_THROWS(load_chips((dir / "missing.txt").string(), kTiny));
}
