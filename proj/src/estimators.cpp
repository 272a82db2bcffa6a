#include "spme/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spme/dst.hpp"
#include "spme/format.hpp"
#include "spme/slobodeckij.hpp"
#include "spme/spectral.hpp"
#include "spme/threading.hpp"

namespace spme {

void EnsembleConfig::validate() const {
  solver.validate();
  if (paths == 0) throw std::invalid_argument("EnsembleConfig: paths must be positive");
  if (solver.record_times.empty())
    throw std::invalid_argument("EnsembleConfig: solver.record_times must be nonempty");
  for (double p : p_moments)
    if (!(p >= 0.0 && p <= solver.m + 1.0))
      throw std::invalid_argument("EnsembleConfig: moment orders must lie in [0, m+1]");
}

std::string hgamma_functional_name(double gamma) { return "hgamma_sq[" + format_double(gamma) + "]"; }

namespace {

struct PathSummary {
  bool blowup = false;
  // series[functional][time index]
  std::vector<std::vector<double>> series;
  std::vector<double> sup_norm;  // per tracked gamma: max_t ||v(t)||_{H^gamma}
};

// Accumulates sums shifted by the first sample, so identical inputs (a
// noiseless ensemble) yield a variance of exactly zero.
struct Reducer {
  bool primed = false;
  std::vector<double> anchor, sumd, sumd2;
  void init(std::size_t n) {
    primed = false;
    anchor.assign(n, 0.0);
    sumd.assign(n, 0.0);
    sumd2.assign(n, 0.0);
  }
  void add(const std::vector<double>& x) {
    if (!primed) {
      anchor = x;
      primed = true;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - anchor[i];
      sumd[i] += d;
      sumd2[i] += d * d;
    }
  }
  SeriesStat finish(std::size_t count) const {
    SeriesStat s;
    const double n = static_cast<double>(count);
    s.mean.resize(sumd.size());
    s.variance.resize(sumd.size());
    s.ci_half.resize(sumd.size());
    for (std::size_t i = 0; i < sumd.size(); ++i) {
      s.mean[i] = anchor[i] + sumd[i] / n;
      double var = 0.0;
      if (count >= 2) var = std::max(0.0, (sumd2[i] - sumd[i] * sumd[i] / n) / (n - 1.0));
      s.variance[i] = var;
      s.ci_half[i] = count >= 2 ? 1.96 * std::sqrt(var / n)
                                : std::numeric_limits<double>::quiet_NaN();
    }
    return s;
  }
};

}  // namespace

EnsembleEstimate run_ensemble(const EnsembleConfig& cfg, const SpectralCoeffs& v0, unsigned workers,
                              const std::function<void(std::size_t, const Trajectory&)>& observer) {
  cfg.validate();
  const std::size_t n_times = cfg.solver.record_times.size();
  const std::size_t n_gammas = cfg.tracked_gammas.size();
  // Functional layout: per gamma the H^gamma square norm series, then (when
  // the solver tracks them) the two accumulated time integrals.
  const bool with_integrals = cfg.solver.track_power_norm;
  const std::size_t n_funcs = n_gammas + (with_integrals ? 2 : 0);

  std::vector<PathSummary> summaries(cfg.paths);
  parallel_for(cfg.paths, workers, [&](std::size_t p) {
    NoiseStream noise(NoiseConfig{.n_modes = std::max<std::size_t>(cfg.solver.n_modes, 1),
                                  .dt = 1.0,
                                  .master_seed = cfg.master_seed,
                                  .path_index = p});
    Trajectory traj = run_path(cfg.solver, v0, noise);
    PathSummary& out = summaries[p];
    if (traj.blowup || traj.snapshots.size() != n_times) {
      out.blowup = true;
      if (observer) observer(p, traj);
      return;
    }
    out.series.assign(n_funcs, std::vector<double>(n_times, 0.0));
    out.sup_norm.assign(n_gammas, 0.0);
    for (std::size_t g = 0; g < n_gammas; ++g) {
      const double gamma = cfg.tracked_gammas[g];
      for (std::size_t i = 0; i < n_times; ++i) {
        const double sq = h_gamma_norm_sq(traj.snapshots[i].vhat, gamma);
        out.series[g][i] = sq;
        out.sup_norm[g] = std::max(out.sup_norm[g], std::sqrt(sq));
      }
    }
    if (with_integrals)
      for (std::size_t i = 0; i < n_times; ++i) {
        out.series[n_gammas][i] = traj.lmp1_integral[i];
        out.series[n_gammas + 1][i] = traj.power_h_integral[i];
      }
    if (observer) observer(p, traj);
  });

  EnsembleEstimate est;
  est.times = cfg.solver.record_times;
  std::vector<Reducer> reducers(n_funcs);
  for (auto& r : reducers) r.init(n_times);
  std::vector<Reducer> moment_reducers(n_gammas * cfg.p_moments.size());
  for (auto& r : moment_reducers) r.init(1);

  std::size_t used = 0;
  for (std::size_t p = 0; p < cfg.paths; ++p) {  // fixed order: schedule-independent
    const PathSummary& s = summaries[p];
    if (s.blowup) {
      ++est.blowup_count;
      continue;
    }
    ++used;
    for (std::size_t f = 0; f < n_funcs; ++f) reducers[f].add(s.series[f]);
    for (std::size_t g = 0; g < n_gammas; ++g)
      for (std::size_t ip = 0; ip < cfg.p_moments.size(); ++ip) {
        const std::vector<double> v{std::pow(s.sup_norm[g], cfg.p_moments[ip])};
        moment_reducers[g * cfg.p_moments.size() + ip].add(v);
      }
  }
  if (used == 0) throw std::runtime_error("run_ensemble: every path blew up");
  est.path_count = used;

  for (std::size_t g = 0; g < n_gammas; ++g)
    est.functionals[hgamma_functional_name(cfg.tracked_gammas[g])] = reducers[g].finish(used);
  if (with_integrals) {
    est.functionals["lmp1_integral"] = reducers[n_gammas].finish(used);
    est.functionals["power_h_integral"] = reducers[n_gammas + 1].finish(used);
  }

  for (std::size_t g = 0; g < n_gammas; ++g)
    for (std::size_t ip = 0; ip < cfg.p_moments.size(); ++ip) {
      SeriesStat s = moment_reducers[g * cfg.p_moments.size() + ip].finish(used);
      ScalarStat sc{s.mean[0], s.variance[0], s.ci_half[0]};
      est.scalar_moments["supt_hnorm[" + format_double(cfg.tracked_gammas[g]) + "]^" +
                         format_double(cfg.p_moments[ip])] = sc;
    }
  return est;
}

DecayFit fit_loglog(const std::vector<double>& t, const std::vector<double>& y, double t_lo,
                    double t_hi) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw std::invalid_argument("fit_loglog: bad window");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo - 1e-12 || t[i] > t_hi + 1e-12) continue;
    if (!(y[i] > 0.0)) throw std::invalid_argument("fit_loglog: nonpositive value in window");
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < 2) throw std::invalid_argument("fit_loglog: fewer than two samples in window");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
  DecayFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0;
  const double mean_y = sy / n;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double pred = fit.intercept + fit.slope * lx[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - mean_y) * (ly[i] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

DecayFit fit_decay(const EnsembleEstimate& est, const std::string& functional, double t_lo,
                   double t_hi) {
  auto it = est.functionals.find(functional);
  if (it == est.functionals.end())
    throw std::invalid_argument("fit_decay: unknown functional " + functional);
  return fit_loglog(est.times, it->second.mean, t_lo, t_hi);
}

HolderEstimate estimate_temporal_holder(const Trajectory& traj, double gamma, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("estimate_temporal_holder: epsilon must be > 0");
  const std::size_t n = traj.snapshots.size();
  if (n < 64) throw std::invalid_argument("estimate_temporal_holder: need >= 64 recorded times");
  const double spacing = traj.snapshots[1].t_nominal - traj.snapshots[0].t_nominal;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = traj.snapshots[i].t_nominal - traj.snapshots[i - 1].t_nominal;
    if (std::abs(d - spacing) > 1e-6 * spacing)
      throw std::invalid_argument("estimate_temporal_holder: record times not uniform");
  }
  const double s = gamma - epsilon;

  HolderEstimate out;
  out.epsilon = epsilon;
  double scale = 0.0;
  for (const auto& snap : traj.snapshots) scale = std::max(scale, h_gamma_norm(snap.vhat, s));

  for (std::size_t lag = 1; lag <= (n - 1) / 2; lag *= 2) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      SpectralCoeffs diff = traj.snapshots[i + lag].vhat;
      for (std::size_t k = 0; k < diff.size(); ++k)
        diff.coeffs[k] -= traj.snapshots[i].vhat.coeffs[k];
      acc += h_gamma_norm(diff, s);
      ++count;
    }
    out.lags.push_back(static_cast<double>(lag) * spacing);
    out.structure.push_back(acc / static_cast<double>(count));
  }
  if (out.lags.size() < 4)
    throw std::invalid_argument("estimate_temporal_holder: fewer than 4 usable lags");

  bool all_zero = true;
  for (double v : out.structure) all_zero = all_zero && (v <= 1e-14 * (scale + 1e-300));
  if (all_zero) {
    out.flat = true;
    out.estimated_exponent = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  DecayFit fit = fit_loglog(out.lags, out.structure, out.lags.front() * (1.0 - 1e-9),
                            out.lags.back() * (1.0 + 1e-9));
  out.estimated_exponent = fit.slope;
  return out;
}

double spacetime_norm(const Trajectory& traj, double gamma_prime, double p) {
  if (traj.snapshots.size() < 2) throw std::invalid_argument("spacetime_norm: need >= 2 snapshots");
  std::vector<double> vals(traj.snapshots.size());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    GridFunction g = dst_inverse(traj.snapshots[i].vhat);
    vals[i] = std::pow(slobodeckij_norm(g, gamma_prime, p), p);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < traj.snapshots.size(); ++i) {
    const double dt = traj.snapshots[i + 1].t_nominal - traj.snapshots[i].t_nominal;
    acc += 0.5 * dt * (vals[i] + vals[i + 1]);
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace spme
