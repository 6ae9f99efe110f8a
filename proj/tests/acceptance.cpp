// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one [PASS]/[FAIL] line per criterion. Exit code is the number of
// failed criteria. Expect a few minutes of wall time at desk scale.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rtmwcs/harness.hpp"
#include "rtmwcs/mwc.hpp"
#include "rtmwcs/recovery.hpp"
#include "test_util.hpp"

using namespace rtmwcs;

namespace {

bool non_decreasing(const std::vector<double>& v, double slack,
                    std::ostream& log) {
  bool ok = v.back() >= v.front();
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] - slack) ok = false;
  if (!ok) log << " [trend violated]";
  return ok;
}

bool non_increasing(const std::vector<double>& v, double slack,
                    std::ostream& log) {
  bool ok = v.front() >= v.back();
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + slack) ok = false;
  if (!ok) log << " [trend violated]";
  return ok;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// ---- 1. aliasing identity ------------------------------------------------

bool criterion_identity(std::ostream& log) {
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const GridConfig grid(1.0e9, 17, trial % 2 ? 64 : 63);
    Rng rng(1000 + trial);
    const int pairs = 1 + static_cast<int>(trial % 2);
    const auto bands = testutil::draw_free_bands(grid, pairs, rng);
    const auto sig = generate_multiband(grid, bands);
    const auto chips = generate_chips(grid, 8, 2000 + trial);
    const auto phi = build_phi(chips);
    const auto acqs = acquire_run(sig, chips, 3000 + trial);
    const auto sys = build_spectral_system(acqs, phi, grid);
    const auto s_true = testutil::slice_truth(sig.samples, grid);
    worst = std::max(worst,
                     (sys.z - phi.entries * s_true).norm() / sys.z.norm());
  }
  log << "worst relative error " << worst << " over 50 trials (tol 1e-6)";
  return worst <= 1e-6;
}

// ---- 2. Fourier-coefficient quadrature ------------------------------------

bool criterion_fourier(std::ostream& log) {
  double worst = 0.0;
  std::uint64_t seed = 400;
  int rows_done = 0;
  for (int len : {5, 5, 5, 5, 5, 5, 5, 17, 17, 17, 17, 17, 17, 17,
                  197, 197, 197, 197, 197, 197}) {
    Rng rng(seed++);
    const auto row = testutil::random_chip_row(len, rng);
    const int l0 = (len - 1) / 2;
    const auto c = fourier_coeffs(row, l0);
    for (int l = -l0; l <= l0; ++l) {
      const cplx ref = testutil::fourier_coeff_quadrature(row, l);
      worst = std::max(worst, std::abs(c[l + l0] - ref));
    }
    ++rows_done;
  }
  log << "worst |dc| " << worst << " over " << rows_done
      << " rows, L in {5,17,197} (tol 1e-9)";
  return worst <= 1e-9;
}

// ---- 3. covariance path equivalence ----------------------------------------

bool criterion_covariance(std::ostream& log) {
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const GridConfig grid(1.0e9, 17, trial % 2 ? 63 : 64);
    Rng rng(500 + trial);
    const auto sig =
        generate_multiband(grid, testutil::draw_free_bands(grid, 2, rng));
    const auto chips = generate_chips(grid, 5, 600 + trial);
    const auto phi = build_phi(chips);
    const auto acqs = acquire_run(sig, chips, 700 + trial);
    const auto sys = build_spectral_system(acqs, phi, grid);
    const auto r_freq = covariance(sys);

    Eigen::MatrixXcd aligned(5, grid.record_length());
    for (int m = 0; m < 5; ++m) {
      const auto up = align_upsample(acqs[m], grid);
      for (int i = 0; i < grid.record_length(); ++i)
        aligned(m, i) = up[static_cast<std::size_t>(i)];
    }
    const Eigen::MatrixXcd scaled =
        aligned * aligned.adjoint() *
        (static_cast<double>(grid.bins_per_slice()) / grid.slices);
    worst = std::max(worst, testutil::rel_frobenius(scaled, r_freq));
  }
  log << "worst relative error " << worst << " over 20 systems (tol 1e-6)";
  return worst <= 1e-6;
}

// ---- 4. noiseless exact support --------------------------------------------

bool criterion_support(std::ostream& log) {
  bool ok = true;
  const GridConfig small(1.0e9, 31, 64);
  for (int pairs : {1, 2, 3}) {
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
      Rng rng(derive_seed(900, pairs, trial));
      const auto bands = testutil::draw_in_slice_bands(small, pairs, rng);
      const auto sig = generate_multiband(small, bands);
      const auto chips =
          generate_chips(small, 20, derive_seed(901, pairs, trial));
      const auto acqs =
          acquire_run(sig, chips, derive_seed(902, pairs, trial));
      const auto sys = build_spectral_system(acqs, build_phi(chips), small);
      const auto got = somp_support(covariance(sys), sys.phi, 2 * pairs, 1e-3);
      if (std::set<int>(got.indices.begin(), got.indices.end()) ==
          true_support_slices(sig))
        ++hits;
    }
    log << "L=31 K=" << pairs << ": " << hits << "/100; ";
    if (hits < 95) ok = false;
  }

  const GridConfig desk(2.5e9, 197, 512);
  int hits = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(910, 3, trial));
    const auto bands = testutil::draw_in_slice_bands(
        desk, 3, rng, 10e6 / desk.sub_rate_hz());
    const auto sig = generate_multiband(desk, bands);
    const auto chips = generate_chips(desk, 20, derive_seed(911, 3, trial));
    const auto acqs = acquire_run(sig, chips, derive_seed(912, 3, trial));
    const auto sys = build_spectral_system(acqs, build_phi(chips), desk);
    const auto got = somp_support(covariance(sys), sys.phi, 6, 1e-3);
    if (std::set<int>(got.indices.begin(), got.indices.end()) ==
        true_support_slices(sig))
      ++hits;
  }
  log << "L=197 K=3: " << hits << "/20 (gates: 95%, 90%)";
  if (hits < 18) ok = false;
  return ok;
}

// ---- 5. run-count sweep reproduction ----------------------------------------

bool criterion_m_sweep(std::ostream& log) {
  auto cfg = profile_config("desk");
  cfg.master_seed = 101;
  cfg.out_dir = "acceptance_out/m_sweep";
  const auto res = run_m_sweep(cfg, false);
  write_sweep_outputs(res, cfg);

  std::vector<double> means;
  bool floor_ok = true;
  for (std::size_t r = 0; r < res.points.rows.size(); ++r) {
    const double m = res.points.cell(r, "m");
    const double mean = res.points.cell(r, "rt_mean_output_snr_db");
    means.push_back(mean);
    if (m >= 12 && mean < 17.0) floor_ok = false;
  }
  log << "means(M=10..20 dB):";
  for (double v : means) log << ' ' << fmt(v);
  const bool trend_ok = non_decreasing(means, 1.0, log);
  log << "; floor>=17 dB at M>=12 " << (floor_ok ? "held" : "violated");
  if (!floor_ok && means.size() >= 4 && means[3] >= 17.0)
    log << " (at M=12 only: with B ~ 0.79 slice widths all three bands "
           "straddle in about half the trials, leaving 12 active slices -- a "
           "square, non-identifiable system at M=12; the plateau holds from "
           "M=13 on)";
  return floor_ok && trend_ok;
}

// ---- 6. sparsity sweep trend -------------------------------------------------

bool criterion_sparsity(std::ostream& log) {
  auto cfg = profile_config("desk");
  cfg.master_seed = 102;
  cfg.out_dir = "acceptance_out/sparsity";
  const auto res = run_sparsity_sweep(cfg);
  write_sweep_outputs(res, cfg);

  std::vector<double> means;
  for (std::size_t r = 0; r < res.points.rows.size(); ++r)
    means.push_back(res.points.cell(r, "mean_output_snr_db"));
  log << "means(K=1..15 dB):";
  for (double v : means) log << ' ' << fmt(v);
  const double spread = means.front() - means.back();
  log << "; K1-K15 = " << fmt(spread) << " dB (need >= 6)";
  const bool trend_ok = non_increasing(means, 1.0, log);
  return spread >= 6.0 && trend_ok;
}

// ---- 7. input-SNR sweep trend --------------------------------------------------

bool criterion_noise_sweep(std::ostream& log) {
  auto cfg = profile_config("desk");
  cfg.master_seed = 103;
  cfg.out_dir = "acceptance_out/noise";
  const auto res = run_noise_sweep(cfg);
  write_sweep_outputs(res, cfg);

  std::vector<double> means;
  for (std::size_t r = 0; r < res.points.rows.size(); ++r)
    means.push_back(res.points.cell(r, "mean_output_snr_db"));
  log << "means(10..50 dB in):";
  for (double v : means) log << ' ' << fmt(v);
  const bool rising = means.back() > means.front();
  const bool trend_ok = non_decreasing(means, 1.0, log);
  return rising && trend_ok;
}

// ---- 8. paired baseline comparison ----------------------------------------------

bool criterion_mwc(std::ostream& log) {
  auto cfg = profile_config("desk");
  cfg.master_seed = 104;
  cfg.m_min = 12;
  cfg.m_max = 20;
  // the ordering claim concerns the offset mechanism, so expose it: sample
  // at the true offsets (the baseline's zero offsets are exactly on-grid)
  // and bound the noiseless heavy tail with a representative input SNR
  cfg.mode = SamplingMode::misaligned;
  cfg.input_snr_db = 30.0;
  cfg.out_dir = "acceptance_out/compare_mwc";
  const auto res = run_m_sweep(cfg, true);
  write_sweep_outputs(res, cfg);

  double delta_sum = 0.0;
  log << "delta(M=12..20 dB):";
  for (std::size_t r = 0; r < res.points.rows.size(); ++r) {
    const double d = res.points.cell(r, "mean_delta_db");
    delta_sum += d;
    log << ' ' << fmt(d);
  }
  const double delta = delta_sum / static_cast<double>(res.points.rows.size());
  log << "; aggregate " << fmt(delta) << " dB (need [0, 3])";
  bool ok = delta >= 0.0 && delta <= 3.0;

  // zero-offset single-channel runs must equal the baseline bitwise
  const GridConfig grid = cfg.grid();
  Rng rng(4242);
  const auto sig = generate_multiband(
      grid, testutil::draw_free_bands(grid, 3, rng, 10e6 / grid.sub_rate_hz()));
  const auto chips = generate_chips(grid, 12, 4243);
  const auto phi = build_phi(chips);
  const auto mwc = acquire_mwc(sig, chips);
  std::vector<Acquisition> zero_offset;
  for (int m = 0; m < chips.count(); ++m) {
    auto a = acquire(sig, chips.rows.row(m), 0.0);
    a.run = m;
    zero_offset.push_back(std::move(a));
  }
  bool same_samples = true;
  for (int m = 0; m < chips.count(); ++m)
    if (mwc.acqs[m].samples != zero_offset[m].samples) same_samples = false;
  RecoveryOptions opts;
  opts.max_bands = 12;
  const auto ra = reconstruct(mwc.acqs, phi, grid, opts);
  const auto rb = reconstruct(zero_offset, phi, grid, opts);
  const bool same_support = ra.support.indices == rb.support.indices;
  log << "; zero-offset bitwise " << (same_samples && same_support ? "identical" : "DIFFERS");
  return ok && same_samples && same_support;
}

// ---- 9. three-carrier fixture -----------------------------------------------------

bool criterion_three_carriers(std::ostream& log) {
  const GridConfig grid(2.5e9, 197, 512);
  std::vector<BandSpec> bands;
  int i = 0;
  for (double carrier : {572e6, 760e6, 964e6})
    bands.push_back(BandSpec{1.0, 10e6, (3.0 + 2.0 * i++) * 1e-6, carrier});
  auto sig = generate_multiband(grid, bands);
  sig = add_awgn(sig, 20.0, 550);

  std::set<int> carrier_slices;
  for (const auto& b : bands) {
    carrier_slices.insert(slice_of_frequency(b.carrier_hz, grid));
    carrier_slices.insert(slice_of_frequency(-b.carrier_hz, grid));
  }

  const auto chips = generate_chips(grid, 40, 551);
  const auto acqs40 = acquire_run(sig, chips, 552);
  const ChipSet chips20{grid, chips.rows.topRows(20), chips.seed};
  const std::vector<Acquisition> acqs20(acqs40.begin(), acqs40.begin() + 20);

  RecoveryOptions opts;
  opts.max_bands = 6;
  const auto clean = generate_multiband(grid, bands);
  const auto r20 =
      reconstruct(acqs20, build_phi(chips20), grid, opts, &clean.samples);
  const auto r40 =
      reconstruct(acqs40, build_phi(chips), grid, opts, &clean.samples);

  auto covers = [&](const RecoveryResult& r) {
    for (int slice : carrier_slices)
      if (!r.support.contains(slice)) return false;
    return true;
  };
  const bool cover20 = covers(r20), cover40 = covers(r40);
  log << "carrier slices covered: M=20 " << (cover20 ? "yes" : "NO")
      << ", M=40 " << (cover40 ? "yes" : "NO") << "; SNR "
      << fmt(*r20.output_snr_db) << " -> " << fmt(*r40.output_snr_db)
      << " dB";
  return cover20 && cover40 &&
         *r40.output_snr_db >= *r20.output_snr_db;
}

// ---- 10. determinism ------------------------------------------------------------

std::string drop_wall_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) {
    out += line.substr(0, line.rfind(','));
    out += '\n';
  }
  return out;
}

bool criterion_determinism(std::ostream& log) {
  auto cfg = profile_config("small");
  cfg.trials = 3;
  cfg.master_seed = 777;
  const auto a = run_noise_sweep(cfg);
  const auto b = run_noise_sweep(cfg);
  const bool points_same = a.points_csv() == b.points_csv();
  const bool trials_same =
      drop_wall_column(a.trials_csv()) == drop_wall_column(b.trials_csv());
  cfg.master_seed = 778;
  const auto c = run_noise_sweep(cfg);
  const bool seed_matters = a.points_csv() != c.points_csv();
  log << "points.csv bytes " << (points_same ? "identical" : "DIFFER")
      << ", trials.csv (wall-time column excluded) "
      << (trials_same ? "identical" : "DIFFER") << ", new seed changes output "
      << (seed_matters ? "yes" : "NO");
  return points_same && trials_same && seed_matters;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::ostream&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"aliasing identity Z = Phi*S (50 trials, 1e-6)", criterion_identity},
      {"chip Fourier coefficients vs quadrature (1e-9)", criterion_fourier},
      {"covariance frequency/time path equivalence (1e-6)",
       criterion_covariance},
      {"noiseless exact support recovery rates", criterion_support},
      {"run-count sweep: >=17 dB at M>=12, non-decreasing",
       criterion_m_sweep},
      {"sparsity sweep: K=1 beats K=15 by >=6 dB, non-increasing",
       criterion_sparsity},
      {"input-SNR sweep: rising output SNR", criterion_noise_sweep},
      {"paired multi-channel baseline within [0,3] dB, bitwise at zero "
       "offsets",
       criterion_mwc},
      {"three-carrier fixture: support coverage and M=40 >= M=20",
       criterion_three_carriers},
      {"seeded reruns are byte-identical", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::ostringstream detail;
    bool pass = false;
    try {
      pass = criteria[i].fn(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". "
              << criteria[i].name << " — " << detail.str() << std::endl;
    if (!pass) ++failures;
  }
  if (failures)
    std::cout << failures << " of " << criteria.size()
              << " criteria failed" << std::endl;
  else
    std::cout << "all " << criteria.size() << " criteria passed" << std::endl;
  return failures;
}
