#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "spme/noise.hpp"
#include "spme/sigma.hpp"
#include "spme/types.hpp"

namespace spme {

// Time step selection. The adaptive rule bounds the explicit nonlinear
// update: dt <= safety * dx^2 / (nu + m max|v|^{m-1}). With the exact
// continuum eigenvalues lambda_J ~ pi^2/dx^2 the linearized stability
// threshold is safety < 2/pi^2 ~ 0.2026, hence the 0.18 default.
struct DtPolicy {
  enum class Kind { fixed, adaptive };
  Kind kind = Kind::adaptive;
  double dt = 1e-4;       // fixed kind
  double safety = 0.18;   // adaptive kind
  double dt_max = 1e-2;
  double dt_min = 1e-12;

  static DtPolicy fixed_step(double dt) {
    DtPolicy p;
    p.kind = Kind::fixed;
    p.dt = dt;
    return p;
  }
  static DtPolicy adaptive(double safety = 0.18, double dt_max = 1e-2, double dt_min = 1e-12) {
    DtPolicy p;
    p.kind = Kind::adaptive;
    p.safety = safety;
    p.dt_max = dt_max;
    p.dt_min = dt_min;
    return p;
  }
};

// Full parameterization of one path of
//   dv = d_xx(nu v + gain v^{[m]}) dt + sum_{k<=n} sigma(x,v) e^k dw^k.
struct SolverConfig {
  double m = 2.0;
  double nu = 1.0;          // viscosity, in (0,1]
  std::size_t n_modes = 1;  // noise truncation; ignored when sigma is zero
  std::size_t J = 127;
  double T = 1.0;
  DtPolicy dt_policy = DtPolicy::adaptive();
  double nonlinear_gain = 1.0;  // scales the v^{[m]} drift; 1/2 mirrors the particle limit
  SigmaSpec sigma = SigmaSpec::zero();
  double gamma_track = -0.75;
  std::vector<double> record_times;  // sorted, in [0, T]
  double blowup_guard = 1e8;
  int oversample = 2;
  bool track_budget = false;
  bool track_power_norm = false;

  void validate() const;
  static std::vector<double> uniform_times(double T, std::size_t intervals);
};

struct PathState {
  double t = 0.0;
  GridFunction v;
  SpectralCoeffs vhat;  // kept in sync with v
  std::uint64_t step_count = 0;
  bool blowup = false;
};

// One step of the H^gamma energy identity; residual closes the sum exactly.
struct BudgetRow {
  double t = 0.0;
  double dt = 0.0;
  double d_norm = 0.0;
  double drift_visc = 0.0;
  double drift_nl = 0.0;
  double ito_correction = 0.0;
  double martingale_part = 0.0;
  double residual = 0.0;
};

struct EnergyBudget {
  double gamma = 0.0;
  std::vector<BudgetRow> rows;
};

struct BudgetSummary {
  double max_abs_residual = 0.0;
  double cumulative_residual = 0.0;  // signed sum
  double abs_residual_sum = 0.0;
  std::size_t steps = 0;
};
BudgetSummary energy_budget(const EnergyBudget& budget);

struct Snapshot {
  double t_nominal = 0.0;  // requested record time
  double t = 0.0;          // step boundary the record snapped to
  SpectralCoeffs vhat;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  // Accumulated time integrals at each snapshot (left endpoint rule):
  std::vector<double> lmp1_integral;     // int_0^t ||v||^{m+1}_{L^{m+1}} ds
  std::vector<double> power_h_integral;  // int_0^t ||v^{[(m+1)/2]}||^2_{H^{1+gamma}} ds
  EnergyBudget budget;
  bool blowup = false;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t total_steps = 0;
  double m = 0.0;
  double gamma = 0.0;
};

PathState make_initial_state(const SolverConfig& cfg, const SpectralCoeffs& v0);

// One IMEX Euler-Maruyama step: implicit viscous part, explicit nonlinear
// Laplacian and noise. On a tripped guard the state is frozen and the
// blow-up flag set; no exception is thrown.
PathState step(const PathState& state, const SolverConfig& cfg, const WienerIncrements& inc);

Trajectory run_path(const SolverConfig& cfg, const SpectralCoeffs& v0, const NoiseStream& noise);
// sigma must be identically zero; no randomness is consumed.
Trajectory run_deterministic(const SolverConfig& cfg, const SpectralCoeffs& v0);

// Source-type similarity solution of the deterministic porous medium
// equation, used as a validation oracle. Rejects profiles whose support
// touches the boundary of (0,1).
GridFunction barenblatt(double m, double t, double t0, double x0, double mass_param, std::size_t J);

// Initial data helpers.
SpectralCoeffs constant_initial(double level, std::size_t J);
SpectralCoeffs grid_initial(const GridFunction& g);

}  // namespace spme
