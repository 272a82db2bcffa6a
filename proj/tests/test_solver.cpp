#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spme/dst.hpp"
#include "spme/inequalities.hpp"
#include "spme/solver.hpp"
#include "spme/spectral.hpp"
#include "test_util.hpp"

using namespace spme;

namespace {

SolverConfig base_config(std::size_t J, double T) {
  SolverConfig cfg;
  cfg.J = J;
  cfg.T = T;
  cfg.m = 2.0;
  cfg.nu = 1e-6;
  cfg.sigma = SigmaSpec::zero();
  cfg.n_modes = 1;
  cfg.record_times = SolverConfig::uniform_times(T, 10);
  return cfg;
}

double l1_distance(const GridFunction& a, const GridFunction& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::abs(a.values[j] - b.values[j]);
  return acc * grid_spacing(a.size());
}

}  // namespace

TEST_CASE("zero initial data with sigma(.,0)=0 is a fixed point") {
  SolverConfig cfg = base_config(31, 0.01);
  cfg.sigma = SigmaSpec::power(0.3, 1.5, 2.0);
  cfg.n_modes = 8;
  cfg.dt_policy = DtPolicy::fixed_step(1e-4);
  NoiseStream noise(NoiseConfig{.n_modes = 8, .dt = 1e-4, .master_seed = 1, .path_index = 0});
  Trajectory traj = run_path(cfg, SpectralCoeffs::zeros(31), noise);
  REQUIRE_FALSE(traj.blowup);
  for (const auto& snap : traj.snapshots)
    for (double c : snap.vhat.coeffs) CHECK(c == 0.0);
}

TEST_CASE("linear exactness: every mode follows (1 + nu lambda dt)^{-steps}") {
  const std::size_t J = 31;
  SolverConfig cfg = base_config(J, 0.1);
  cfg.nu = 0.5;
  cfg.nonlinear_gain = 0.0;
  cfg.dt_policy = DtPolicy::fixed_step(1e-3);
  cfg.record_times = {cfg.T};
  SpectralCoeffs v0 = test::random_coeffs(J, 5, 0, 0.2);
  Trajectory traj = run_deterministic(cfg, v0);
  REQUIRE(traj.snapshots.size() == 1);
  const auto& end = traj.snapshots.back().vhat;
  const auto steps = traj.total_steps;
  CHECK(steps == 100);
  for (std::size_t k = 1; k <= J; ++k) {
    const double expected =
        v0.coeffs[k - 1] * std::pow(1.0 + cfg.nu * eigenvalue(k) * 1e-3, -double(steps));
    CHECK(std::abs(end.coeffs[k - 1] - expected) <= 1e-12 * std::abs(expected));
  }
}

TEST_CASE("deterministic flow commutes with negation (odd nonlinearity)") {
  const std::size_t J = 63;
  SolverConfig cfg = base_config(J, 0.01);
  cfg.nu = 0.01;
  SpectralCoeffs v0 = test::random_coeffs(J, 8, 1, 1.5);
  SpectralCoeffs v0n = v0;
  for (auto& c : v0n.coeffs) c = -c;
  cfg.record_times = {cfg.T};
  Trajectory a = run_deterministic(cfg, v0);
  Trajectory b = run_deterministic(cfg, v0n);
  REQUIRE_FALSE(a.blowup);
  REQUIRE_FALSE(b.blowup);
  for (std::size_t k = 0; k < J; ++k) {
    const double x = a.snapshots.back().vhat.coeffs[k];
    const double y = b.snapshots.back().vhat.coeffs[k];
    CHECK(std::abs(x + y) <= 1e-10 * (std::abs(x) + 1e-12));
  }
}

TEST_CASE("deterministic and fixed-seed runs are reproducible bit for bit") {
  SolverConfig cfg = base_config(31, 0.005);
  cfg.sigma = SigmaSpec::power(0.2, 1.5, 2.0);
  cfg.n_modes = 8;
  cfg.dt_policy = DtPolicy::fixed_step(5e-5);
  SpectralCoeffs v0 = SpectralCoeffs::mode(1, 31);
  NoiseStream noise(NoiseConfig{.n_modes = 8, .dt = 5e-5, .master_seed = 77, .path_index = 4});
  Trajectory t1 = run_path(cfg, v0, noise);
  Trajectory t2 = run_path(cfg, v0, noise);
  REQUIRE(t1.snapshots.size() == t2.snapshots.size());
  for (std::size_t i = 0; i < t1.snapshots.size(); ++i)
    for (std::size_t k = 0; k < 31; ++k)
      CHECK(t1.snapshots[i].vhat.coeffs[k] == t2.snapshots[i].vhat.coeffs[k]);

  // sigma = 0 runs are deterministic regardless of the stream.
  SolverConfig det = cfg;
  det.sigma = SigmaSpec::zero();
  Trajectory d1 = run_deterministic(det, v0);
  Trajectory d2 = run_deterministic(det, v0);
  for (std::size_t i = 0; i < d1.snapshots.size(); ++i)
    for (std::size_t k = 0; k < 31; ++k)
      CHECK(d1.snapshots[i].vhat.coeffs[k] == d2.snapshots[i].vhat.coeffs[k]);
}

TEST_CASE("record semantics: [0] returns the initial state only; fixed dt snaps") {
  SolverConfig cfg = base_config(15, 0.01);
  cfg.record_times = {0.0};
  Trajectory traj = run_deterministic(cfg, SpectralCoeffs::mode(1, 15));
  REQUIRE(traj.snapshots.size() == 1);
  CHECK(traj.snapshots[0].t == 0.0);
  for (std::size_t k = 0; k < 15; ++k)
    CHECK(traj.snapshots[0].vhat.coeffs[k] == ((k == 0) ? 1.0 : 0.0));

  SolverConfig snap = base_config(15, 0.02);
  snap.dt_policy = DtPolicy::fixed_step(0.003);
  snap.record_times = {0.01};
  Trajectory s = run_deterministic(snap, SpectralCoeffs::mode(1, 15));
  REQUIRE(s.snapshots.size() == 1);
  CHECK(s.snapshots[0].t_nominal == 0.01);
  CHECK(s.snapshots[0].t == doctest::Approx(0.012).epsilon(1e-9));
}

TEST_CASE("barenblatt oracle: positivity, support, mass, residual refinement") {
  const double m = 2.0, t0 = 0.01, C = 0.1, x0 = 0.5;
  GridFunction g = barenblatt(m, 0.0, t0, x0, C, 255);
  double mass0 = 0.0;
  for (double v : g.values) CHECK(v >= 0.0);
  for (double v : g.values) mass0 += v;
  mass0 *= grid_spacing(255);
  // Self-similar mass conservation of the formula.
  GridFunction glater = barenblatt(m, 0.05, t0, x0, C, 255);
  double mass1 = 0.0;
  for (double v : glater.values) mass1 += v;
  mass1 *= grid_spacing(255);
  CHECK(mass1 == doctest::Approx(mass0).epsilon(2e-4));
  // Compact support strictly inside (0,1).
  CHECK(g.values.front() == 0.0);
  CHECK(g.values.back() == 0.0);
  // Support reaching the boundary is rejected.
  CHECK_THROWS_AS(barenblatt(m, 10.0, t0, x0, C, 255), std::domain_error);

  // PDE residual of the formula shrinks under grid refinement (interior of
  // the support only; centered differences in x, forward in t).
  auto residual = [&](std::size_t J) {
    const double dt = 1e-7;
    GridFunction a = barenblatt(m, 0.02, t0, x0, C, J);
    GridFunction b = barenblatt(m, 0.02 + dt, t0, x0, C, J);
    const double h = grid_spacing(J);
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < J; ++j) {
      // Stay well inside the support plateau.
      if (a.values[j] < 0.2 * C * std::pow(0.02 + t0, -1.0 / (m + 1.0))) continue;
      const double ut = (b.values[j] - a.values[j]) / dt;
      const double wl = signed_power(a.values[j - 1], m);
      const double wc = signed_power(a.values[j], m);
      const double wr = signed_power(a.values[j + 1], m);
      const double uxx = (wl - 2.0 * wc + wr) / (h * h);
      worst = std::max(worst, std::abs(ut - uxx));
    }
    return worst;
  };
  const double r1 = residual(127);
  const double r2 = residual(511);
  CHECK(r2 < 0.5 * r1);
}

TEST_CASE("deterministic solver tracks the barenblatt oracle under refinement") {
  const double m = 2.0, t0 = 0.01, C = 0.1, x0 = 0.5, T = 0.05;
  double prev_err = std::numeric_limits<double>::infinity();
  for (std::size_t J : {63, 127}) {
    SolverConfig cfg = base_config(J, T);
    cfg.record_times = {T};
    cfg.track_power_norm = false;
    Trajectory traj = run_deterministic(cfg, grid_initial(barenblatt(m, 0.0, t0, x0, C, J)));
    REQUIRE_FALSE(traj.blowup);
    GridFunction got = dst_inverse(traj.snapshots.back().vhat);
    const double err = l1_distance(got, barenblatt(m, T, t0, x0, C, J));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 5e-3);
}

TEST_CASE("mass is conserved while the support stays interior") {
  const std::size_t J = 127;
  SolverConfig cfg = base_config(J, 0.03);
  cfg.record_times = {0.0, 0.03};
  Trajectory traj = run_deterministic(cfg, grid_initial(barenblatt(2.0, 0.0, 0.01, 0.5, 0.1, J)));
  const double mass_start = integral(traj.snapshots.front().vhat);
  const double mass_end = integral(traj.snapshots.back().vhat);
  CHECK(std::abs(mass_end - mass_start) <= 1e-3 * std::abs(mass_start));
}

TEST_CASE("comparison principle spot check on ordered deterministic data") {
  const std::size_t J = 63;
  SolverConfig cfg = base_config(J, 0.02);
  cfg.record_times = {0.02};
  GridFunction lo = barenblatt(2.0, 0.0, 0.02, 0.5, 0.08, J);
  GridFunction hi = lo;
  for (std::size_t j = 1; j <= J; ++j)
    hi.values[j - 1] += 0.2 * std::numbers::sqrt2 *
                        std::sin(std::numbers::pi * double(j) / double(J + 1));
  Trajectory tl = run_deterministic(cfg, grid_initial(lo));
  Trajectory th = run_deterministic(cfg, grid_initial(hi));
  GridFunction vl = dst_inverse(tl.snapshots.back().vhat);
  GridFunction vh = dst_inverse(th.snapshots.back().vhat);
  double max_scale = 0.0;
  for (double x : vh.values) max_scale = std::max(max_scale, std::abs(x));
  for (std::size_t j = 0; j < J; ++j) CHECK(vh.values[j] - vl.values[j] >= -1e-3 * max_scale);
}

TEST_CASE("energy budget: all-zero case and linear residual order") {
  // v0 = 0, sigma(.,0) = 0: every term vanishes.
  SolverConfig zero = base_config(15, 0.01);
  zero.track_budget = true;
  zero.sigma = SigmaSpec::power(0.4, 1.5, 2.0);
  zero.n_modes = 4;
  zero.dt_policy = DtPolicy::fixed_step(1e-3);
  NoiseStream noise(NoiseConfig{.n_modes = 4, .dt = 1e-3, .master_seed = 3, .path_index = 0});
  Trajectory tz = run_path(zero, SpectralCoeffs::zeros(15), noise);
  for (const auto& row : tz.budget.rows) {
    CHECK(row.d_norm == 0.0);
    CHECK(row.residual == 0.0);
    CHECK(row.ito_correction == 0.0);
  }

  // Pure linear flow: cumulative residual decreases linearly in dt.
  auto cum_residual = [](double dt) {
    SolverConfig cfg = base_config(31, 0.1);
    cfg.nu = 0.8;
    cfg.nonlinear_gain = 0.0;
    cfg.track_budget = true;
    cfg.dt_policy = DtPolicy::fixed_step(dt);
    cfg.record_times = {0.1};
    SpectralCoeffs v0 = SpectralCoeffs::zeros(31);
    v0.coeffs[0] = 1.0;
    v0.coeffs[2] = 0.3;
    Trajectory t = run_deterministic(cfg, v0);
    return std::abs(energy_budget(t.budget).cumulative_residual);
  };
  const double r1 = cum_residual(1e-3);
  const double r2 = cum_residual(5e-4);
  const double r4 = cum_residual(2.5e-4);
  CHECK(r2 < r1);
  CHECK(r4 < r2);
  CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.2));  // first order in dt
}

TEST_CASE("deterministic dissipation: drift terms nonpositive, norm nonincreasing") {
  const std::size_t J = 63;
  SolverConfig cfg = base_config(J, 0.02);
  cfg.track_budget = true;
  cfg.gamma_track = -0.75;
  cfg.record_times = SolverConfig::uniform_times(0.02, 8);
  Trajectory traj = run_deterministic(cfg, grid_initial(barenblatt(2.0, 0.0, 0.01, 0.5, 0.1, J)));
  REQUIRE_FALSE(traj.blowup);
  for (const auto& row : traj.budget.rows) {
    CHECK(row.drift_visc <= 0.0);
    CHECK(row.drift_nl <= 1e-10 * (std::abs(row.d_norm) + 1.0));  // Stroock-Varopoulos sign
  }
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& snap : traj.snapshots) {
    const double n = h_gamma_norm_sq(snap.vhat, cfg.gamma_track);
    CHECK(n <= prev * (1.0 + 1e-9) + 1e-12);
    prev = n;
  }
}

TEST_CASE("blow-up is flagged, not thrown, and the trajectory truncates") {
  SolverConfig cfg = base_config(31, 0.5);
  cfg.nu = 1e-6;
  cfg.dt_policy = DtPolicy::fixed_step(0.05);  // violates the explicit stability bound
  cfg.record_times = SolverConfig::uniform_times(0.5, 5);
  SpectralCoeffs v0 = constant_initial(5.0, 31);
  Trajectory traj = run_deterministic(cfg, v0);
  CHECK(traj.blowup);
  CHECK(std::isfinite(traj.blowup_time));
  CHECK(traj.snapshots.size() < 6);

  // Initial data beyond the guard flags immediately.
  SolverConfig tiny = base_config(15, 0.01);
  tiny.blowup_guard = 1.0;
  PathState st = make_initial_state(tiny, constant_initial(50.0, 15));
  CHECK(st.blowup);
}

TEST_CASE("single step API matches the driver and rejects bad increments") {
  SolverConfig cfg = base_config(15, 0.01);
  cfg.sigma = SigmaSpec::power(0.2, 1.5, 2.0);
  cfg.n_modes = 4;
  cfg.dt_policy = DtPolicy::fixed_step(1e-4);
  NoiseStream noise(NoiseConfig{.n_modes = 4, .dt = 1e-4, .master_seed = 11, .path_index = 2});
  PathState st = make_initial_state(cfg, SpectralCoeffs::mode(1, 15));
  PathState next = step(st, cfg, noise.at(0));
  CHECK(next.t == doctest::Approx(1e-4));
  CHECK(next.step_count == 1);

  WienerIncrements bad;
  bad.dw = {0.1};  // wrong length
  bad.dt = 1e-4;
  CHECK_THROWS_AS(step(st, cfg, bad), std::invalid_argument);
}
