#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "spme/types.hpp"

namespace spme {

enum class KernelKind { epanechnikov, triangle, custom_table };

// Interaction kernel V: compactly supported on [-1,1], nonnegative, unit
// integral. V_eps(x) = V(x/eps)/eps.
struct Kernel {
  KernelKind kind = KernelKind::epanechnikov;
  std::vector<std::pair<double, double>> table;  // custom kind: (s, V(s)) knots

  double value(double s) const;
  double deriv(double s) const;
  void validate() const;

  static Kernel epanechnikov();  // 3/4 (1 - s^2)+
  static Kernel triangle();      // (1 - |s|)+
  static Kernel custom(std::vector<std::pair<double, double>> knots);
};

// Offspring distribution on {0,1,2,...}; critical (mean exactly one).
struct OffspringLaw {
  std::vector<double> probs;  // probs[k] = P(k offspring)

  double mean() const;
  double variance() const;
  void validate() const;
  std::size_t sample(double u) const;  // inverse CDF of a uniform in [0,1)

  static OffspringLaw critical_binary();  // {0,2} with probability 1/2 each
  static OffspringLaw identity();         // point mass at 1
};

struct ParticleConfig {
  std::size_t N = 1000;  // initial particle count; fixes the 1/N normalization
  double epsilon = 0.05;
  Kernel kernel = Kernel::epanechnikov();
  double branch_rate = 1.0;  // in the sped-up clock (rate N corresponds to base rate 1)
  OffspringLaw offspring = OffspringLaw::critical_binary();
  double dt = 1e-3;
  double T = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
  bool drift_enabled = true;
  bool branching_enabled = true;

  void validate() const;
};

struct ParticleState {
  std::vector<double> positions;
  double t = 0.0;
  std::uint64_t step_count = 0;

  std::size_t alive_count() const { return positions.size(); }
};

struct DriftInfo {
  double max_displacement = 0.0;
  bool under_resolved = false;  // displacement exceeded eps/4 somewhere
};

// Forward Euler on the pairwise interaction; positions are sorted and the
// compact support is exploited with a two-pointer window (prefix sums make
// the Epanechnikov sweep O(P log P)). The drift pushes particles down the
// local density gradient, matching the porous-medium limit.
DriftInfo drift_step(ParticleState& state, const ParticleConfig& cfg);

// Tau-leap critical branching: each particle independently triggers with
// probability rate*dt (must be <= 0.1) and is replaced by k offspring at the
// same position. Randomness is addressed by (seed, run, step, slot).
void branch_step(ParticleState& state, const ParticleConfig& cfg);

struct EmpiricalMeasure {
  std::vector<double> edges;        // bins + 1 ascending edges
  std::vector<std::size_t> counts;  // particles per bin (outliers clamped to end bins)
  std::vector<double> masses;       // counts / N
  double bandwidth = 0.0;
  std::vector<double> kde;          // optional smoothed density at bin centers

  double total_mass(std::size_t N) const;
};

EmpiricalMeasure empirical_measure(const ParticleState& state, const ParticleConfig& cfg,
                                   std::size_t bins, double lo, double hi, double bandwidth = 0.0);

struct ParticleRun {
  std::vector<double> times;
  std::vector<std::size_t> population;
  std::vector<double> mass;           // alive/N
  std::vector<double> first_moment;   // (1/N) sum Y_i
  std::vector<double> second_moment;  // (1/N) sum (Y_i - 1/2)^2
  std::vector<EmpiricalMeasure> profiles;
  std::size_t drift_warnings = 0;
};

ParticleRun run_particles(const ParticleConfig& cfg, std::vector<double> initial_positions,
                          const std::vector<double>& record_times, std::size_t profile_bins = 0,
                          double lo = 0.0, double hi = 1.0);

// Deterministic stratified inverse-CDF positions for a density on [lo, hi]:
// particle i sits at the (i+1/2)/N quantile.
std::vector<double> stratified_sample(const std::function<double(double)>& density, std::size_t N,
                                      double lo, double hi);

// Compactly supported bump density of unit mass centered at c, half-width w.
double bump_density(double x, double c, double w);

struct Trajectory;

// Side-by-side report of particle ensembles against SPDE runs: total mass
// and second-moment curves with confidence bands, L1 distances between mean
// density profiles on shared bins, the estimated boundary-contact time of
// the SPDE support, and the magnitude of SPDE positivity violations. No
// convergence rate is asserted.
struct ParticleSpdeComparison {
  std::vector<double> times;
  std::vector<double> particle_mass_mean, particle_mass_ci;
  std::vector<double> spde_mass_mean, spde_mass_ci;
  std::vector<double> particle_m2_mean, particle_m2_ci;
  std::vector<double> spde_m2_mean, spde_m2_ci;
  std::vector<double> profile_l1;  // per time; NaN where profiles are absent
  std::size_t mass_band_overlap = 0;
  std::size_t mass_band_total = 0;  // times where both sides are statistically resolved
  double min_spde_value = 0.0;
  double t_boundary_estimate = 0.0;  // +inf when the support never reaches the boundary
};

ParticleSpdeComparison compare_to_spde(const std::vector<ParticleRun>& particle_runs,
                                       const std::vector<Trajectory>& spde_runs,
                                       std::size_t bins, double lo, double hi);

}  // namespace spme
