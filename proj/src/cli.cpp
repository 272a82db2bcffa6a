#include "spme/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spme/config.hpp"
#include "spme/csv.hpp"
#include "spme/dst.hpp"
#include "spme/estimators.hpp"
#include "spme/inequalities.hpp"
#include "spme/manifest.hpp"
#include "spme/particles.hpp"
#include "spme/solver.hpp"
#include "spme/spectral.hpp"
#include "spme/threading.hpp"

namespace spme::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScientific = 1;
constexpr int kExitConfig = 2;

struct Invocation {
  LabConfig cfg;
  std::string config_text;
  std::string command;
};

GridFunction random_grid(std::size_t J, std::uint64_t seed, std::uint64_t case_index,
                         double decay) {
  std::vector<double> c(J);
  for (std::size_t k = 1; k <= J; ++k)
    c[k - 1] = rng::gaussian(seed, case_index, 0, static_cast<std::uint32_t>(k),
                             rng::Tag::test_sweep) /
               std::pow(static_cast<double>(k), decay);
  return dst_inverse(SpectralCoeffs::unchecked(std::move(c)));
}

void write_reports(const std::string& out_dir, const std::vector<InequalityReport>& reports,
                   RunManifest& manifest) {
  {
    std::ofstream txt(out_dir + "/reports.txt", std::ios::binary);
    for (const auto& r : reports) txt << r.line() << "\n";
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json e;
    e["name"] = r.name;
    e["lhs"] = r.lhs;
    e["rhs"] = r.rhs;
    e["margin"] = r.margin;
    e["tolerance"] = r.tolerance;
    e["holds"] = r.holds;
    e["warning"] = r.warning;
    e["metadata"] = r.metadata;
    j.push_back(std::move(e));
  }
  {
    std::ofstream js(out_dir + "/reports.json", std::ios::binary);
    js << j.dump(2) << "\n";
  }
  manifest.add_artifact(out_dir, "reports.txt");
  manifest.add_artifact(out_dir, "reports.json");
}

int cmd_verify(const Invocation& inv, RunManifest& manifest) {
  const VerifySection& v = inv.cfg.verify;
  const std::uint64_t seed = inv.cfg.seed;
  std::vector<InequalityReport> reports;

  // Krylov constant brackets.
  for (double g : v.krylov_gammas) {
    KrylovInterval k = krylov_constant(g, v.krylov_terms);
    InequalityReport rep;
    rep.name = "krylov_constant";
    rep.lhs = k.lower;
    rep.rhs = k.upper;
    rep.margin = k.width();
    rep.tolerance = 0.0;
    rep.holds = k.lower <= k.upper;
    if (g == -1.0) rep.holds = rep.holds && k.lower <= 1.0 / 3.0 && 1.0 / 3.0 <= k.upper;
    rep.set_meta("gamma_tilde", g);
    rep.set_meta("terms", static_cast<double>(v.krylov_terms));
    rep.set_meta("width", k.width());
    reports.push_back(std::move(rep));
  }

  // Krylov inequality sweep.
  for (double g : v.krylov_gammas)
    for (std::size_t trial = 0; trial < v.trials; ++trial) {
      GridFunction u = random_grid(v.J, seed, trial, 0.6);
      InequalityReport rep = verify_krylov(u, g, std::min(v.modes, v.J), v.oversample);
      rep.set_meta("trial", static_cast<double>(trial));
      reports.push_back(std::move(rep));
    }

  // Stroock-Varopoulos sweep (plus the m = 1 identity case).
  for (double m : v.sv_m)
    for (double beta : v.sv_beta)
      for (std::size_t trial = 0; trial < v.trials; ++trial) {
        GridFunction u = random_grid(v.J, seed ^ 0x51, trial, 0.8);
        InequalityReport rep = verify_stroock_varopoulos(dst_forward(u), m, beta, v.oversample);
        rep.set_meta("trial", static_cast<double>(trial));
        reports.push_back(std::move(rep));
      }

  // Pointwise monotonicity scans, aggregated per m.
  for (double m : v.mono_m) {
    double min_margin = std::numeric_limits<double>::infinity();
    double worst_a = 0.0, worst_b = 0.0;
    bool all_hold = true;
    for (std::size_t i = 0; i < v.mono_pairs; ++i) {
      const double a = 20.0 * rng::uniform(seed, 1, i, 0, rng::Tag::test_sweep) - 10.0;
      const double b = 20.0 * rng::uniform(seed, 1, i, 1, rng::Tag::test_sweep) - 10.0;
      InequalityReport rep = verify_pointwise_monotonicity(a, b, m);
      all_hold = all_hold && rep.holds;
      if (rep.margin < min_margin) {
        min_margin = rep.margin;
        worst_a = a;
        worst_b = b;
      }
    }
    InequalityReport rep;
    rep.name = "pointwise_monotonicity_scan";
    rep.lhs = min_margin;
    rep.rhs = 0.0;
    rep.margin = min_margin;
    rep.tolerance = 0.0;
    rep.holds = all_hold;
    rep.set_meta("m", m);
    rep.set_meta("pairs", static_cast<double>(v.mono_pairs));
    rep.set_meta("worst_a", worst_a);
    rep.set_meta("worst_b", worst_b);
    reports.push_back(std::move(rep));
  }

  // Power regularity constants against the closed-form extremizer.
  for (double mt : v.power_m) {
    PowerRegularityConstant c = power_regularity_constant(mt);
    const double expected = std::pow(2.0, 2.0 * (mt - 1.0));
    InequalityReport rep;
    rep.name = "power_regularity_constant";
    rep.lhs = c.sup_ratio;
    rep.rhs = expected;
    rep.margin = -std::abs(c.sup_ratio - expected);
    rep.tolerance = 1e-3 * expected;
    rep.finalize();
    rep.set_meta("m_tilde", mt);
    rep.set_meta("argmax_b", c.argmax_b);
    reports.push_back(std::move(rep));
  }

  // Interpolation inequality sweep, aggregated.
  {
    bool all_hold = true;
    double min_gap = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    const std::pair<double, double> windows[] = {{-1.0, 0.0}, {-1.0, 1.0}, {0.0, 1.0}};
    for (std::size_t trial = 0; trial < v.trials; ++trial) {
      SpectralCoeffs c = dst_forward(random_grid(v.J, seed ^ 2, trial, 0.5));
      for (auto [g0, g1] : windows)
        for (double theta : {0.25, 0.5, 0.75}) {
          InterpolationReport rep = check_interpolation(c, g0, g1, theta);
          all_hold = all_hold && rep.holds;
          min_gap = std::min(min_gap, rep.rhs - rep.lhs);
          ++count;
        }
    }
    InequalityReport rep;
    rep.name = "interpolation_scan";
    rep.lhs = min_gap;
    rep.rhs = 0.0;
    rep.margin = min_gap;
    rep.tolerance = 1e-12;
    rep.holds = all_hold;
    rep.set_meta("checks", static_cast<double>(count));
    reports.push_back(std::move(rep));
  }

  // The configured diffusion coefficient.
  ScanSpec scan;
  scan.r_max = v.scan_rmax;
  reports.push_back(validate_sigma(inv.cfg.solver.sigma, inv.cfg.solver.m, scan));

  // Operator monotonicity / coercivity with the configured sigma.
  const std::size_t op_trials = std::max<std::size_t>(1, v.trials / 10);
  for (std::size_t trial = 0; trial < op_trials; ++trial) {
    GridFunction v1 = random_grid(v.J, seed ^ 3, 2 * trial, 1.0);
    GridFunction v2 = random_grid(v.J, seed ^ 3, 2 * trial + 1, 1.0);
    InequalityReport rep = verify_operator_monotonicity(v1, v2, inv.cfg.solver.m,
                                                        inv.cfg.solver.sigma,
                                                        std::min<std::size_t>(32, v.J),
                                                        v.oversample);
    rep.set_meta("trial", static_cast<double>(trial));
    reports.push_back(std::move(rep));
    InequalityReport coer = verify_coercivity(v1, inv.cfg.solver.m, inv.cfg.solver.sigma,
                                              std::min<std::size_t>(32, v.J), v.oversample);
    coer.set_meta("trial", static_cast<double>(trial));
    reports.push_back(std::move(coer));
  }

  // Certified smallness threshold for the tracked gamma.
  if (inv.cfg.solver.gamma_track < -0.5) {
    InequalityReport rep;
    rep.name = "delta_threshold";
    rep.lhs = delta_threshold(inv.cfg.solver.gamma_track, inv.cfg.solver.m);
    rep.rhs = rep.lhs;
    rep.margin = 0.0;
    rep.tolerance = 0.0;
    rep.holds = true;
    rep.set_meta("gamma", inv.cfg.solver.gamma_track);
    rep.set_meta("m", inv.cfg.solver.m);
    reports.push_back(std::move(rep));
  }

  write_reports(inv.cfg.out_dir, reports, manifest);

  std::size_t violations = 0, warnings = 0;
  for (const auto& r : reports) {
    if (r.warning) ++warnings;
    if (!r.holds && !r.warning) ++violations;
  }
  std::cout << "verify: " << reports.size() << " reports, " << violations << " violations, "
            << warnings << " warnings\n";
  return violations == 0 ? kExitOk : kExitScientific;
}

void write_trajectory_csv(const std::string& out_dir, const std::string& name,
                          const Trajectory& traj, const SolverConfig& scfg, RunManifest& manifest) {
  {
    CsvWriter csv(out_dir + "/" + name);
    csv.row({"t", "hgamma_sq", "lmp1_norm", "power_h_sq", "blowup"});
    for (const auto& snap : traj.snapshots) {
      GridFunction g = dst_inverse(snap.vhat);
      const double lmp1 = std::pow(lp_norm(g, scfg.m + 1.0), scfg.m + 1.0);
      SpectralCoeffs pw = apply_pointwise(
          snap.vhat, [&](double, double r) { return signed_power(r, 0.5 * (scfg.m + 1.0)); },
          scfg.oversample, scfg.J);
      csv.row({CsvWriter::cell(snap.t_nominal),
               CsvWriter::cell(h_gamma_norm_sq(snap.vhat, scfg.gamma_track)),
               CsvWriter::cell(lmp1),
               CsvWriter::cell(h_gamma_norm_sq(pw, 1.0 + scfg.gamma_track)), "0"});
    }
    if (traj.blowup)
      csv.row({CsvWriter::cell(traj.blowup_time), "nan", "nan", "nan", "1"});
  }
  manifest.add_artifact(out_dir, name);
}

int cmd_simulate(const Invocation& inv, RunManifest& manifest) {
  const SolverConfig& scfg = inv.cfg.solver;
  SpectralCoeffs v0 = inv.cfg.initial.build(scfg.J, scfg.m);
  Trajectory traj;
  if (scfg.sigma.is_zero()) {
    traj = run_deterministic(scfg, v0);
  } else {
    NoiseStream noise(NoiseConfig{.n_modes = scfg.n_modes, .dt = 1.0, .master_seed = inv.cfg.seed,
                                  .path_index = 0});
    traj = run_path(scfg, v0, noise);
  }
  write_trajectory_csv(inv.cfg.out_dir, "trajectory.csv", traj, scfg, manifest);

  if (scfg.track_budget) {
    {
      CsvWriter csv(inv.cfg.out_dir + "/budget.csv");
      csv.row({"t", "dt", "d_norm", "drift_visc", "drift_nl", "ito_correction", "martingale_part",
               "residual"});
      for (const auto& row : traj.budget.rows)
        csv.row({CsvWriter::cell(row.t), CsvWriter::cell(row.dt), CsvWriter::cell(row.d_norm),
                 CsvWriter::cell(row.drift_visc), CsvWriter::cell(row.drift_nl),
                 CsvWriter::cell(row.ito_correction), CsvWriter::cell(row.martingale_part),
                 CsvWriter::cell(row.residual)});
    }
    manifest.add_artifact(inv.cfg.out_dir, "budget.csv");
  }
  if (inv.cfg.write_fields) {
    std::ofstream bin(inv.cfg.out_dir + "/fields.bin", std::ios::binary);
    const std::uint64_t J = scfg.J;
    bin.write(reinterpret_cast<const char*>(&J), sizeof(J));
    for (const auto& snap : traj.snapshots) {
      GridFunction g = dst_inverse(snap.vhat);
      bin.write(reinterpret_cast<const char*>(g.values.data()),
                static_cast<std::streamsize>(sizeof(double) * g.values.size()));
    }
    bin.close();
    manifest.add_artifact(inv.cfg.out_dir, "fields.bin");
  }
  std::cout << "simulate: " << traj.snapshots.size() << " snapshots, " << traj.total_steps
            << " steps" << (traj.blowup ? ", BLOWUP" : "") << "\n";
  return traj.blowup ? kExitScientific : kExitOk;
}

int cmd_estimate(const Invocation& inv, RunManifest& manifest) {
  EnsembleConfig ecfg = inv.cfg.ensemble();
  SpectralCoeffs v0 = inv.cfg.initial.build(ecfg.solver.J, ecfg.solver.m);
  EnsembleEstimate est;
  try {
    est = run_ensemble(ecfg, v0, inv.cfg.workers);
  } catch (const std::runtime_error& e) {
    std::cerr << "estimate: " << e.what() << "\n";
    return kExitScientific;
  }

  {
    CsvWriter csv(inv.cfg.out_dir + "/ensemble.csv");
    csv.row({"t", "functional", "mean", "variance", "ci_half_width", "paths", "blowups"});
    for (const auto& [name, stat] : est.functionals)
      for (std::size_t i = 0; i < est.times.size(); ++i)
        csv.row({CsvWriter::cell(est.times[i]), name, CsvWriter::cell(stat.mean[i]),
                 CsvWriter::cell(stat.variance[i]), CsvWriter::cell(stat.ci_half[i]),
                 CsvWriter::cell(est.path_count), CsvWriter::cell(est.blowup_count)});
    for (const auto& [name, sm] : est.scalar_moments)
      csv.row({CsvWriter::cell(est.times.back()), name, CsvWriter::cell(sm.mean),
               CsvWriter::cell(sm.variance), CsvWriter::cell(sm.ci_half),
               CsvWriter::cell(est.path_count), CsvWriter::cell(est.blowup_count)});
  }
  manifest.add_artifact(inv.cfg.out_dir, "ensemble.csv");

  if (inv.cfg.fit.enabled) {
    DecayFit fit = fit_decay(est, inv.cfg.fit.functional, inv.cfg.fit.t_lo, inv.cfg.fit.t_hi);
    {
      CsvWriter fits(inv.cfg.out_dir + "/fits.csv");
      fits.row({"functional", "t_lo", "t_hi", "slope", "intercept", "r_squared", "target_slope"});
      fits.row({inv.cfg.fit.functional, CsvWriter::cell(fit.t_lo), CsvWriter::cell(fit.t_hi),
                CsvWriter::cell(fit.slope), CsvWriter::cell(fit.intercept),
                CsvWriter::cell(fit.r_squared), CsvWriter::cell(inv.cfg.fit.target_slope)});
    }
    manifest.add_artifact(inv.cfg.out_dir, "fits.csv");
  }
  std::cout << "estimate: " << est.path_count << " paths, " << est.blowup_count << " blowups\n";
  return kExitOk;
}

int cmd_particles(const Invocation& inv, RunManifest& manifest) {
  const ParticleSection& p = inv.cfg.particles;
  const std::size_t records = 20;
  std::vector<double> record_times(records + 1);
  for (std::size_t i = 0; i <= records; ++i)
    record_times[i] = p.cfg.T * static_cast<double>(i) / static_cast<double>(records);

  const auto alive0 = static_cast<std::size_t>(
      std::llround(p.initial.mass * static_cast<double>(p.cfg.N)));
  if (alive0 == 0) throw ConfigError("particles: initial mass too small for N");
  std::vector<double> init =
      stratified_sample([&](double x) { return p.initial.density(x); }, alive0, 0.0, 1.0);

  std::vector<ParticleRun> runs(p.runs);
  parallel_for(p.runs, inv.cfg.workers, [&](std::size_t r) {
    ParticleConfig cfg = p.cfg;
    cfg.seed = inv.cfg.seed;
    cfg.run_index = r;
    runs[r] = run_particles(cfg, init, record_times, p.bins, 0.0, 1.0);
  });

  {
    CsvWriter csv(inv.cfg.out_dir + "/particles.csv");
    csv.row({"run", "t", "population", "mass", "com", "second_moment"});
    for (std::size_t r = 0; r < runs.size(); ++r)
      for (std::size_t i = 0; i < runs[r].times.size(); ++i) {
        const double mass = runs[r].mass[i];
        const double com = mass > 0.0 ? runs[r].first_moment[i] / mass
                                      : std::numeric_limits<double>::quiet_NaN();
        csv.row({CsvWriter::cell(r), CsvWriter::cell(runs[r].times[i]),
                 CsvWriter::cell(runs[r].population[i]), CsvWriter::cell(mass),
                 CsvWriter::cell(com), CsvWriter::cell(runs[r].second_moment[i])});
      }
  }
  manifest.add_artifact(inv.cfg.out_dir, "particles.csv");

  if (p.bins > 0) {
    {
      CsvWriter prof(inv.cfg.out_dir + "/profiles.csv");
      std::vector<std::string> header{"run", "t"};
      const double width = 1.0 / static_cast<double>(p.bins);
      for (std::size_t b = 0; b < p.bins; ++b)
        header.push_back("x" + format_double((static_cast<double>(b) + 0.5) * width));
      prof.row(header);
      for (std::size_t r = 0; r < runs.size(); ++r)
        for (std::size_t i = 0; i < runs[r].times.size(); ++i) {
          std::vector<std::string> row{CsvWriter::cell(r), CsvWriter::cell(runs[r].times[i])};
          for (double m : runs[r].profiles[i].masses) row.push_back(CsvWriter::cell(m / width));
          prof.row(row);
        }
    }
    manifest.add_artifact(inv.cfg.out_dir, "profiles.csv");
  }
  std::size_t warnings = 0;
  for (const auto& r : runs) warnings += r.drift_warnings;
  std::cout << "particles: " << runs.size() << " runs, " << warnings << " drift warnings\n";
  return kExitOk;
}

int cmd_convergence(const Invocation& inv, RunManifest& manifest) {
  const ConvergenceSection& c = inv.cfg.convergence;
  struct Row {
    std::size_t J;
    double err;
  };
  std::vector<Row> rows(c.Js.size());
  parallel_for(c.Js.size(), inv.cfg.workers, [&](std::size_t i) {
    const auto J = static_cast<std::size_t>(c.Js[i]);
    SolverConfig scfg;
    scfg.J = J;
    scfg.m = c.m;
    scfg.nu = c.nu;
    scfg.T = c.T;
    scfg.sigma = SigmaSpec::zero();
    scfg.record_times = {c.T};
    Trajectory traj = run_deterministic(scfg, grid_initial(barenblatt(c.m, 0.0, c.t0, c.x0, c.C, J)));
    GridFunction got = dst_inverse(traj.snapshots.back().vhat);
    GridFunction oracle = barenblatt(c.m, c.T, c.t0, c.x0, c.C, J);
    double err = 0.0;
    for (std::size_t j = 0; j < J; ++j) err += std::abs(got.values[j] - oracle.values[j]);
    rows[i] = {J, err * grid_spacing(J)};
  });

  // Linear single-mode exactness at the coarsest grid.
  const auto J0 = static_cast<std::size_t>(c.Js.front());
  double linear_err = 0.0;
  {
    SolverConfig scfg;
    scfg.J = J0;
    scfg.m = c.m;
    scfg.nu = 0.5;
    scfg.T = 0.1;
    scfg.nonlinear_gain = 0.0;
    scfg.sigma = SigmaSpec::zero();
    scfg.dt_policy = DtPolicy::fixed_step(1e-3);
    scfg.record_times = {0.1};
    Trajectory traj = run_deterministic(scfg, SpectralCoeffs::mode(1, J0));
    const double expected = std::pow(1.0 + 0.5 * eigenvalue(1) * 1e-3,
                                     -static_cast<double>(traj.total_steps));
    linear_err = std::abs(traj.snapshots.back().vhat.coeffs[0] - expected) / expected;
  }

  bool monotone = true;
  {
    CsvWriter csv(inv.cfg.out_dir + "/convergence.csv");
    csv.row({"J", "l1_error", "ratio"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double ratio =
          i > 0 ? rows[i - 1].err / rows[i].err : std::numeric_limits<double>::quiet_NaN();
      if (i > 0 && !(ratio > 1.0)) monotone = false;
      csv.row({CsvWriter::cell(rows[i].J), CsvWriter::cell(rows[i].err), CsvWriter::cell(ratio)});
    }
  }
  manifest.add_artifact(inv.cfg.out_dir, "convergence.csv");

  {
    CsvWriter lin(inv.cfg.out_dir + "/linear.csv");
    lin.row({"J", "nu", "dt", "max_rel_error"});
    lin.row({CsvWriter::cell(J0), "0.5", "0.001", CsvWriter::cell(linear_err)});
  }
  manifest.add_artifact(inv.cfg.out_dir, "linear.csv");

  std::cout << "convergence: " << rows.size() << " grids, monotone=" << (monotone ? "yes" : "no")
            << ", linear_rel_err=" << format_double(linear_err) << "\n";
  return monotone && linear_err < 1e-12 ? kExitOk : kExitScientific;
}

int dispatch(const Invocation& inv) {
  std::filesystem::create_directories(inv.cfg.out_dir);
  RunManifest manifest;
  manifest.command = inv.command;
  manifest.config_text = inv.config_text;
  manifest.seed = inv.cfg.seed;
  manifest.workers = inv.cfg.workers;
  manifest.started = now_iso8601();
  int code = kExitOk;
  if (inv.command == "verify")
    code = cmd_verify(inv, manifest);
  else if (inv.command == "simulate")
    code = cmd_simulate(inv, manifest);
  else if (inv.command == "estimate")
    code = cmd_estimate(inv, manifest);
  else if (inv.command == "particles")
    code = cmd_particles(inv, manifest);
  else if (inv.command == "convergence")
    code = cmd_convergence(inv, manifest);
  manifest.finished = now_iso8601();
  manifest.write(inv.cfg.out_dir);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("spmelab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"spmelab: numerical laboratory for the 1-D stochastic porous medium equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_override = 0;
  unsigned workers_override = 0;
  std::string out_override;

  const char* names[] = {"verify", "simulate", "estimate", "particles", "convergence"};
  const char* descs[] = {
      "run the inequality verification suites",
      "integrate one SPDE path and export the trajectory",
      "Monte Carlo ensemble statistics over independent paths",
      "branching interacting-particle simulation",
      "deterministic validation studies (Barenblatt sweep, linear mode)",
  };
  for (std::size_t i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "configuration file (INI-style key = value)");
    sub->add_option("--seed", seed_override, "master seed override");
    sub->add_option("--workers", workers_override, "worker thread count override");
    sub->add_option("--out", out_override, "output directory override");
  }
  app.add_subcommand("print-defaults", "print the default configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "print-defaults") {
    std::cout << default_config_text();
    return kExitOk;
  }

  try {
    Invocation inv;
    inv.command = chosen->get_name();
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw ConfigError("cannot open config file: " + config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      inv.config_text = ss.str();
    } else {
      inv.config_text = default_config_text();
    }
    inv.cfg = LabConfig::from_ini(IniDoc::parse(inv.config_text));
    if (chosen->count("--seed") > 0) inv.cfg.seed = seed_override;
    if (chosen->count("--workers") > 0) inv.cfg.workers = workers_override;
    if (chosen->count("--out") > 0) inv.cfg.out_dir = out_override;
    return dispatch(inv);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace spme::cli
