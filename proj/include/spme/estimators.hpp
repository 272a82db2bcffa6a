#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "spme/solver.hpp"

namespace spme {

struct EnsembleConfig {
  std::size_t paths = 64;
  SolverConfig solver;
  std::uint64_t master_seed = 0;
  std::vector<double> tracked_gammas = {-0.75};
  std::vector<double> p_moments = {1.0, 2.0};  // within [0, m+1]

  void validate() const;
};

struct SeriesStat {
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> ci_half;  // 1.96 sqrt(variance/paths); NaN when paths < 2
};

struct ScalarStat {
  double mean = 0.0;
  double variance = 0.0;
  double ci_half = 0.0;
};

struct EnsembleEstimate {
  std::vector<double> times;
  std::map<std::string, SeriesStat> functionals;
  std::map<std::string, ScalarStat> scalar_moments;
  std::size_t path_count = 0;   // paths entering the statistics
  std::size_t blowup_count = 0;
};

std::string hgamma_functional_name(double gamma);

// Spatial integrability exponent of the third energy estimate:
// gamma' = 2(1+gamma)/(m+1).
inline double gamma_prime(double gamma, double m) { return 2.0 * (1.0 + gamma) / (m + 1.0); }

// Monte Carlo over independent paths (path_index = 0..M-1). Statistics are
// reduced in path order after the parallel phase, so the result is identical
// for any worker count. Blown-up paths are excluded and counted; throws when
// every path blows up. The optional observer sees each finished trajectory
// (called from worker threads; it must synchronize its own state).
EnsembleEstimate run_ensemble(
    const EnsembleConfig& cfg, const SpectralCoeffs& v0, unsigned workers = 1,
    const std::function<void(std::size_t, const Trajectory&)>& observer = nullptr);

struct DecayFit {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares on (log t, log y) over the window; rejects nonpositive
// values and windows with fewer than two samples.
DecayFit fit_loglog(const std::vector<double>& t, const std::vector<double>& y, double t_lo,
                    double t_hi);
DecayFit fit_decay(const EnsembleEstimate& est, const std::string& functional, double t_lo,
                   double t_hi);

struct HolderEstimate {
  double epsilon = 0.0;
  double estimated_exponent = 0.0;
  bool flat = false;  // structure function identically ~0; exponent is NaN
  std::vector<double> lags;
  std::vector<double> structure;  // S(tau) = mean_t ||v(t+tau) - v(t)||_{H^{gamma-eps}}
};

// Structure-function exponent of t -> v(t) in H^{gamma-epsilon} over dyadic
// lags; requires >= 64 uniformly spaced snapshots and >= 4 usable lags.
HolderEstimate estimate_temporal_holder(const Trajectory& traj, double gamma, double epsilon);

// (int_0^T slobodeckij_norm(v(t), gamma', p)^p dt)^{1/p} by trapezoid over
// the recorded times.
double spacetime_norm(const Trajectory& traj, double gamma_prime, double p);

}  // namespace spme
