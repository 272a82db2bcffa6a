#include <cmath>
#include <numeric>

#include "doctest.h"
#include "spme/particles.hpp"
#include "spme/solver.hpp"
#include "test_util.hpp"

using namespace spme;

namespace {

std::vector<double> uniform_cloud(std::size_t n, double lo, double hi) {
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return y;
}

double center_of_mass(const std::vector<double>& y) {
  return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

}  // namespace

TEST_CASE("kernels: values, unit mass, custom table validation") {
  Kernel e = Kernel::epanechnikov();
  CHECK(e.value(0.0) == 0.75);
  CHECK(e.value(1.1) == 0.0);
  CHECK(e.deriv(0.0) == 0.0);
  CHECK(e.deriv(0.5) == doctest::Approx(-0.75));

  Kernel t = Kernel::triangle();
  CHECK(t.value(0.0) == 1.0);
  CHECK(t.deriv(0.5) == -1.0);
  CHECK(t.deriv(-0.5) == 1.0);

  CHECK_NOTHROW(Kernel::custom({{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}));
  CHECK_THROWS_AS(Kernel::custom({{-1.0, 0.0}, {0.0, 3.0}, {1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::custom({{-1.0, 0.0}, {0.0, -1.0}, {1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("offspring laws: criticality is validated at configuration time") {
  OffspringLaw binary = OffspringLaw::critical_binary();
  CHECK(binary.mean() == 1.0);
  CHECK(binary.variance() == 1.0);
  CHECK_NOTHROW(binary.validate());
  CHECK(binary.sample(0.3) == 0);
  CHECK(binary.sample(0.7) == 2);

  OffspringLaw bad{{0.4, 0.0, 0.6}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  ParticleConfig cfg;
  cfg.offspring = bad;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.offspring = binary;
  cfg.branch_rate = 10.0;
  cfg.dt = 0.05;  // rate*dt = 0.5 > 0.1
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("drift: single particle is stationary; pairs move symmetrically") {
  ParticleConfig cfg;
  cfg.N = 2;
  cfg.epsilon = 0.1;
  cfg.dt = 1e-3;
  cfg.branching_enabled = false;

  ParticleState one;
  one.positions = {0.5};
  drift_step(one, cfg);
  CHECK(one.positions[0] == 0.5);

  ParticleState two;
  two.positions = {0.48, 0.52};
  drift_step(two, cfg);
  const double d0 = two.positions[0] - 0.48;
  const double d1 = two.positions[1] - 0.52;
  CHECK(d0 == doctest::Approx(-d1).epsilon(1e-14));
  CHECK(d1 > 0.0);  // repulsion spreads the pair
}

TEST_CASE("drift conserves particle count and center of mass") {
  for (auto kind : {KernelKind::epanechnikov, KernelKind::triangle}) {
    ParticleConfig cfg;
    cfg.N = 10000;
    cfg.epsilon = 0.05;
    cfg.dt = 5e-4;
    cfg.branching_enabled = false;
    cfg.kernel = kind == KernelKind::epanechnikov ? Kernel::epanechnikov() : Kernel::triangle();
    ParticleState st;
    st.positions = stratified_sample([](double x) { return bump_density(x, 0.5, 0.2); }, 10000,
                                     0.0, 1.0);
    const double com0 = center_of_mass(st.positions);
    for (int s = 0; s < 5; ++s) drift_step(st, cfg);
    CHECK(st.positions.size() == 10000);
    CHECK(std::abs(center_of_mass(st.positions) - com0) < 1e-10);
  }
}

TEST_CASE("epanechnikov prefix sweep agrees with the direct window sum") {
  ParticleConfig cfg;
  cfg.N = 500;
  cfg.epsilon = 0.07;
  cfg.dt = 1e-3;
  cfg.branching_enabled = false;
  std::vector<double> init(500);
  for (std::size_t i = 0; i < 500; ++i)
    init[i] = 0.2 + 0.6 * test::test_uniform(7, i, 0);

  ParticleState fast;
  fast.positions = init;
  drift_step(fast, cfg);

  // Direct O(P^2) oracle with the same update rule.
  std::vector<double> y = init;
  std::sort(y.begin(), y.end());
  std::vector<double> disp(y.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    double force = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double d = (y[i] - y[j]) / cfg.epsilon;
      if (std::abs(d) < 1.0) force += -1.5 * d / (cfg.epsilon * cfg.epsilon);
    }
    disp[i] = -cfg.dt / static_cast<double>(cfg.N) * force;
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += disp[i];
  for (std::size_t i = 0; i < y.size(); ++i)
    CHECK(fast.positions[i] == doctest::Approx(y[i]).epsilon(1e-12));
}

TEST_CASE("branching: identity law keeps the population constant; rate 0 is a no-op") {
  ParticleConfig cfg;
  cfg.N = 100;
  cfg.offspring = OffspringLaw::identity();
  cfg.branch_rate = 1.0;
  cfg.dt = 0.05;
  cfg.drift_enabled = false;
  ParticleState st;
  st.positions = uniform_cloud(100, 0.2, 0.8);
  const std::vector<double> before = st.positions;
  for (int s = 0; s < 10; ++s) {
    branch_step(st, cfg);
    st.step_count++;
  }
  CHECK(st.positions.size() == 100);

  cfg.offspring = OffspringLaw::critical_binary();
  cfg.branch_rate = 0.0;
  ParticleState st2;
  st2.positions = before;
  branch_step(st2, cfg);
  CHECK(st2.positions == before);
}

TEST_CASE("critical branching keeps the mean population near N") {
  // Small-scale version of the acceptance run: 40 runs, N = 500.
  ParticleConfig cfg;
  cfg.N = 500;
  cfg.branch_rate = 1.0;
  cfg.dt = 0.05;
  cfg.T = 1.0;
  cfg.drift_enabled = false;
  cfg.seed = 2024;
  double sum = 0.0, sumsq = 0.0;
  const int runs = 40;
  for (int r = 0; r < runs; ++r) {
    cfg.run_index = static_cast<std::uint64_t>(r);
    ParticleRun run = run_particles(cfg, uniform_cloud(cfg.N, 0.1, 0.9), {cfg.T});
    const double pop = static_cast<double>(run.population.back());
    sum += pop;
    sumsq += pop * pop;
  }
  const double mean = sum / runs;
  const double var = (sumsq - runs * mean * mean) / (runs - 1);
  const double se = std::sqrt(var / runs);
  CHECK(std::abs(mean - 500.0) <= 3.0 * se);
}

TEST_CASE("empirical measure: exact mass accounting") {
  ParticleConfig cfg;
  cfg.N = 64;
  ParticleState st;
  st.positions = {0.5};
  EmpiricalMeasure one = empirical_measure(st, cfg, 1, 0.0, 1.0);
  CHECK(one.masses[0] == doctest::Approx(1.0 / 64.0));
  CHECK(one.total_mass(cfg.N) == 1.0 / 64.0);

  st.positions = uniform_cloud(100, 0.0, 1.0);
  for (std::size_t bins : {3u, 7u, 64u}) {
    EmpiricalMeasure m = empirical_measure(st, cfg, bins, 0.0, 1.0);
    CHECK(m.total_mass(cfg.N) == 100.0 / 64.0);
  }
  // Uniform cloud: flat histogram (deterministic stratified positions).
  EmpiricalMeasure flat = empirical_measure(st, cfg, 10, 0.0, 1.0);
  for (std::size_t b = 0; b < 10; ++b) CHECK(flat.counts[b] == 10);
}

TEST_CASE("with drift off and branching off the dynamics is the identity") {
  ParticleConfig cfg;
  cfg.N = 50;
  cfg.drift_enabled = false;
  cfg.branching_enabled = false;
  cfg.dt = 0.01;
  cfg.T = 0.2;
  std::vector<double> init = uniform_cloud(50, 0.3, 0.7);
  ParticleRun run = run_particles(cfg, init, {0.0, 0.1, 0.2});
  CHECK(run.population == std::vector<std::size_t>{50, 50, 50});
  CHECK(run.first_moment[0] == doctest::Approx(run.first_moment[2]).epsilon(1e-15));
}

TEST_CASE("deterministic particle cloud approaches the coarse PDE profile") {
  // Drift only, epsilon fixed: the interacting cloud should track the
  // m = 2 porous medium flow with drift gain 1/2 to a few percent in L1.
  const double T = 0.05, eps = 0.05, mass = 0.02;
  ParticleConfig cfg;
  cfg.N = 20000;
  cfg.epsilon = eps;
  cfg.dt = 2e-3;
  cfg.T = T;
  cfg.branching_enabled = false;
  cfg.seed = 0;
  auto density = [=](double x) { return mass * bump_density(x, 0.5, 0.25); };
  const auto n_alive = static_cast<std::size_t>(mass * static_cast<double>(cfg.N));
  ParticleRun run =
      run_particles(cfg, stratified_sample(density, n_alive, 0.0, 1.0), {T}, 32, 0.0, 1.0);
  CHECK(run.drift_warnings == 0);

  SolverConfig scfg;
  scfg.J = 255;
  scfg.m = 2.0;
  scfg.nu = 1e-6;
  scfg.nonlinear_gain = 0.5;
  scfg.T = T;
  scfg.record_times = {T};
  std::vector<double> nodal(scfg.J);
  for (std::size_t j = 1; j <= scfg.J; ++j)
    nodal[j - 1] = density(static_cast<double>(j) / static_cast<double>(scfg.J + 1));
  Trajectory pde = run_deterministic(scfg, grid_initial(GridFunction(nodal)));

  std::vector<ParticleRun> pruns{run};
  std::vector<Trajectory> struns{pde};
  ParticleSpdeComparison cmp = compare_to_spde(pruns, struns, 32, 0.0, 1.0);
  CHECK(cmp.particle_mass_mean.back() == doctest::Approx(mass).epsilon(1e-6));
  CHECK(cmp.spde_mass_mean.back() == doctest::Approx(mass).epsilon(1e-2));
  CHECK(cmp.profile_l1.back() < 0.2 * mass);
  CHECK(cmp.min_spde_value > -1e-3);
  CHECK(cmp.t_boundary_estimate > T);
}

TEST_CASE("compare_to_spde rejects mismatched horizons") {
  ParticleConfig cfg;
  cfg.N = 10;
  cfg.drift_enabled = false;
  cfg.branching_enabled = false;
  cfg.T = 0.1;
  ParticleRun run = run_particles(cfg, uniform_cloud(10, 0.3, 0.7), {0.0, 0.1}, 8, 0.0, 1.0);

  SolverConfig scfg;
  scfg.J = 31;
  scfg.T = 0.2;
  scfg.record_times = {0.0, 0.2};
  Trajectory pde = run_deterministic(scfg, constant_initial(0.1, 31));
  std::vector<ParticleRun> pruns{run};
  std::vector<Trajectory> struns{pde};
  CHECK_THROWS_AS(compare_to_spde(pruns, struns, 8, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("stochastic cross-check: critical-branching mass bands overlap the SPDE") {
  // Mass 0.05 keeps the SPDE support away from the boundary over the
  // horizon, so both total masses are martingales around the initial value.
  const double T = 0.2, mass = 0.05;
  const std::vector<double> times = {0.0, 0.05, 0.1, 0.15, 0.2};
  auto density = [=](double x) { return mass * bump_density(x, 0.5, 0.2); };

  ParticleConfig pcfg;
  pcfg.N = 2000;
  pcfg.dt = 0.01;
  pcfg.T = T;
  pcfg.drift_enabled = false;
  pcfg.seed = 4242;
  const auto alive = static_cast<std::size_t>(mass * 2000);
  std::vector<ParticleRun> pruns;
  for (std::size_t r = 0; r < 8; ++r) {
    ParticleConfig c = pcfg;
    c.run_index = r;
    pruns.push_back(
        run_particles(c, stratified_sample(density, alive, 0.0, 1.0), times, 16, 0.0, 1.0));
  }

  // SPDE side: m = 2, drift gain 1/2, sigma = 0.25 sqrt(u+).
  SolverConfig scfg;
  scfg.J = 63;
  scfg.m = 2.0;
  scfg.nu = 0.05;
  scfg.n_modes = 16;
  scfg.nonlinear_gain = 0.5;
  scfg.T = T;
  scfg.sigma = SigmaSpec::sqrt_pp(0.25, 2.0);
  scfg.dt_policy = DtPolicy::fixed_step(2e-5);
  scfg.record_times = times;
  std::vector<double> nodal(scfg.J);
  for (std::size_t j = 1; j <= scfg.J; ++j)
    nodal[j - 1] = density(static_cast<double>(j) / 64.0);
  SpectralCoeffs v0 = grid_initial(GridFunction(nodal));
  std::vector<Trajectory> struns;
  for (std::size_t p = 0; p < 8; ++p) {
    NoiseStream noise(NoiseConfig{.n_modes = 16, .dt = 1.0, .master_seed = 515, .path_index = p});
    Trajectory t = run_path(scfg, v0, noise);
    REQUIRE_FALSE(t.blowup);
    struns.push_back(std::move(t));
  }

  ParticleSpdeComparison cmp = compare_to_spde(pruns, struns, 16, 0.0, 1.0);
  // Particle mass is a tight martingale around the initial mass; the SPDE
  // bands are wider but centered. Where both are resolved they overlap.
  for (std::size_t i = 0; i < cmp.times.size(); ++i)
    CHECK(std::abs(cmp.particle_mass_mean[i] - mass) < 0.1 * mass);
  CHECK(cmp.mass_band_total >= 3);
  CHECK(cmp.mass_band_overlap * 2 >= cmp.mass_band_total);  // most bands overlap
  CHECK(cmp.min_spde_value > -0.5);                         // positivity violation is tracked
  CHECK(std::isfinite(cmp.t_boundary_estimate));
}
