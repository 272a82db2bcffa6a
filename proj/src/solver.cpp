#include "spme/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spme/dst.hpp"
#include "spme/spectral.hpp"

namespace spme {

void SolverConfig::validate() const {
  if (!(m >= 1.0)) throw std::invalid_argument("SolverConfig: m must be >= 1");
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("SolverConfig: nu must be in (0,1]");
  if (J == 0) throw std::invalid_argument("SolverConfig: J must be positive");
  if (!sigma.is_zero() && (n_modes == 0 || n_modes > J))
    throw std::invalid_argument("SolverConfig: need 1 <= n_modes <= J");
  if (!(T > 0.0)) throw std::invalid_argument("SolverConfig: T must be positive");
  if (dt_policy.kind == DtPolicy::Kind::fixed && !(dt_policy.dt > 0.0 && dt_policy.dt <= T))
    throw std::invalid_argument("SolverConfig: need 0 < dt <= T");
  if (!(nonlinear_gain >= 0.0 && nonlinear_gain <= 1.0))
    throw std::invalid_argument("SolverConfig: nonlinear_gain must be in [0,1]");
  if (!std::is_sorted(record_times.begin(), record_times.end()))
    throw std::invalid_argument("SolverConfig: record_times must be sorted");
  if (!record_times.empty() && (record_times.front() < 0.0 || record_times.back() > T))
    throw std::invalid_argument("SolverConfig: record_times must lie in [0,T]");
  if (oversample < 1) throw std::invalid_argument("SolverConfig: oversample must be >= 1");
}

std::vector<double> SolverConfig::uniform_times(double T, std::size_t intervals) {
  std::vector<double> out(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    out[i] = T * static_cast<double>(i) / static_cast<double>(intervals);
  return out;
}

BudgetSummary energy_budget(const EnergyBudget& budget) {
  BudgetSummary s;
  s.steps = budget.rows.size();
  for (const auto& row : budget.rows) {
    s.max_abs_residual = std::max(s.max_abs_residual, std::abs(row.residual));
    s.cumulative_residual += row.residual;
    s.abs_residual_sum += std::abs(row.residual);
  }
  return s;
}

namespace {

// Reusable per-path machinery: plans, eigenvalue tables, scratch buffers.
struct StepContext {
  const SolverConfig& cfg;
  std::shared_ptr<const SineTransform> plan;       // size J
  std::shared_ptr<const SineTransform> plan_fine;  // size oversample*(J+1)-1
  std::size_t J;
  std::size_t Jf;
  double q;  // (m+1)/2
  std::vector<double> lambda;          // lambda_k, k = 1..J
  std::vector<double> lambda_fine;     // k = 1..Jf
  std::vector<double> lam_gamma;       // lambda^gamma
  std::vector<double> lam_1pgamma;     // lambda^{1+gamma}
  std::vector<double> lam_1pg_fine;    // lambda^{1+gamma} on the fine range
  std::vector<double> buf_fine_a, buf_fine_b, buf_a, buf_b, buf_c, buf_d, sigma_vals;

  explicit StepContext(const SolverConfig& c)
      : cfg(c),
        plan(SineTransform::plan(c.J)),
        plan_fine(SineTransform::plan(static_cast<std::size_t>(c.oversample) * (c.J + 1) - 1)),
        J(c.J),
        Jf(static_cast<std::size_t>(c.oversample) * (c.J + 1) - 1),
        q(0.5 * (c.m + 1.0)) {
    lambda.resize(J);
    lam_gamma.resize(J);
    lam_1pgamma.resize(J);
    for (std::size_t k = 1; k <= J; ++k) {
      lambda[k - 1] = eigenvalue(k);
      lam_gamma[k - 1] = std::pow(lambda[k - 1], cfg.gamma_track);
      lam_1pgamma[k - 1] = std::pow(lambda[k - 1], 1.0 + cfg.gamma_track);
    }
    lambda_fine.resize(Jf);
    lam_1pg_fine.resize(Jf);
    for (std::size_t k = 1; k <= Jf; ++k) {
      lambda_fine[k - 1] = eigenvalue(k);
      lam_1pg_fine[k - 1] = std::pow(lambda_fine[k - 1], 1.0 + cfg.gamma_track);
    }
    buf_fine_a.resize(Jf);
    buf_fine_b.resize(Jf);
    buf_a.resize(J);
    buf_b.resize(J);
    buf_c.resize(J);
    buf_d.resize(J);
    sigma_vals.resize(J);
  }

  // Coefficients of s(v) evaluated pointwise on the oversampled grid,
  // truncated to J modes (into out); optionally the full fine-resolution
  // H^{1+gamma} square norm of the result.
  void pointwise_power_coeffs(const std::vector<double>& vhat, double p, std::vector<double>& out,
                              double* h1pg_sq) {
    std::fill(buf_fine_a.begin(), buf_fine_a.end(), 0.0);
    std::copy(vhat.begin(), vhat.end(), buf_fine_a.begin());
    plan_fine->inverse_raw(buf_fine_a.data(), buf_fine_b.data());
    for (std::size_t j = 0; j < Jf; ++j) buf_fine_b[j] = signed_power(buf_fine_b[j], p);
    plan_fine->forward_raw(buf_fine_b.data(), buf_fine_a.data());
    std::copy_n(buf_fine_a.begin(), J, out.begin());
    if (h1pg_sq) {
      double acc = 0.0;
      for (std::size_t k = Jf; k >= 1; --k)
        acc += lam_1pg_fine[k - 1] * buf_fine_a[k - 1] * buf_fine_a[k - 1];
      *h1pg_sq = acc;
    }
  }
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double choose_dt(const SolverConfig& cfg, const PathState& state) {
  if (cfg.dt_policy.kind == DtPolicy::Kind::fixed) return cfg.dt_policy.dt;
  const double dx = grid_spacing(cfg.J);
  const double speed = cfg.nu + cfg.m * std::pow(max_abs(state.v.values), cfg.m - 1.0);
  double dt = cfg.dt_policy.safety * dx * dx / speed;
  dt = std::min(dt, cfg.dt_policy.dt_max);
  dt = std::max(dt, cfg.dt_policy.dt_min);
  return dt;
}

// Advances the state in place; returns false when the blow-up guard trips
// (state is left at the last good values, flag set).
bool step_inplace(PathState& state, StepContext& ctx, const WienerIncrements* inc, BudgetRow* budget) {
  const SolverConfig& cfg = ctx.cfg;
  const std::size_t J = ctx.J;
  const double dt = inc ? inc->dt : 0.0;
  const bool noise_on = inc && !cfg.sigma.is_zero();

  // Nonlinear coefficients (v^{[m]})^ on the de-aliased grid.
  std::vector<double>& what = ctx.buf_a;
  if (cfg.nonlinear_gain != 0.0)
    ctx.pointwise_power_coeffs(state.vhat.coeffs, cfg.m, what, nullptr);
  else
    std::fill(what.begin(), what.end(), 0.0);

  // Noise field coefficients.
  std::vector<double>& fhat = ctx.buf_b;
  if (noise_on) {
    std::fill(ctx.buf_c.begin(), ctx.buf_c.end(), 0.0);
    std::copy(inc->dw.begin(), inc->dw.end(), ctx.buf_c.begin());
    ctx.plan->inverse_raw(ctx.buf_c.data(), ctx.buf_d.data());
    for (std::size_t j = 0; j < J; ++j)
      ctx.sigma_vals[j] = cfg.sigma(state.v.node(j), state.v.values[j]);
    for (std::size_t j = 0; j < J; ++j) ctx.buf_d[j] *= ctx.sigma_vals[j];
    ctx.plan->forward_raw(ctx.buf_d.data(), fhat.data());
  } else {
    std::fill(fhat.begin(), fhat.end(), 0.0);
  }

  if (budget) {
    budget->t = state.t;
    budget->dt = dt;
    double norm0 = 0.0, visc = 0.0, nl = 0.0, mart = 0.0;
    for (std::size_t k = 0; k < J; ++k) {
      const double vk = state.vhat.coeffs[k];
      norm0 += ctx.lam_gamma[k] * vk * vk;
      visc += ctx.lam_1pgamma[k] * vk * vk;
      nl += ctx.lam_1pgamma[k] * what[k] * vk;
      mart += ctx.lam_gamma[k] * vk * fhat[k];
    }
    budget->drift_visc = -2.0 * cfg.nu * dt * visc;
    budget->drift_nl = -2.0 * cfg.nonlinear_gain * dt * nl;
    budget->martingale_part = 2.0 * mart;
    budget->d_norm = -norm0;  // completed after the update
    // Ito correction: sum_k ||sigma(v) e^k||^2_{H^gamma} dt on the path grid.
    double ito = 0.0;
    if (noise_on) {
      std::vector<double> prod(J), phat(J);
      for (std::size_t k = 1; k <= cfg.n_modes; ++k) {
        for (std::size_t j = 1; j <= J; ++j)
          prod[j - 1] = ctx.sigma_vals[j - 1] * std::numbers::sqrt2 * ctx.plan->sine(k, j);
        ctx.plan->forward_raw(prod.data(), phat.data());
        double acc = 0.0;
        for (std::size_t l = 0; l < J; ++l) acc += ctx.lam_gamma[l] * phat[l] * phat[l];
        ito += acc;
      }
    }
    budget->ito_correction = ito * dt;
  }

  // Spectral IMEX update.
  std::vector<double> vnew(J);
  for (std::size_t k = 0; k < J; ++k) {
    const double num = state.vhat.coeffs[k] -
                       dt * ctx.lambda[k] * cfg.nonlinear_gain * what[k] + fhat[k];
    vnew[k] = num / (1.0 + dt * cfg.nu * ctx.lambda[k]);
  }
  std::vector<double> vgrid(J);
  ctx.plan->inverse_raw(vnew.data(), vgrid.data());

  bool ok = true;
  for (double x : vgrid)
    if (!std::isfinite(x) || std::abs(x) > cfg.blowup_guard) {
      ok = false;
      break;
    }
  if (!ok) {
    state.blowup = true;
    return false;
  }

  if (budget) {
    double norm1 = 0.0;
    for (std::size_t k = 0; k < J; ++k) norm1 += ctx.lam_gamma[k] * vnew[k] * vnew[k];
    budget->d_norm += norm1;
    budget->residual = budget->d_norm - budget->drift_visc - budget->drift_nl -
                       budget->ito_correction - budget->martingale_part;
  }

  state.vhat.coeffs.swap(vnew);
  state.v.values.swap(vgrid);
  state.t += dt;
  state.step_count += 1;
  return true;
}

}  // namespace

PathState make_initial_state(const SolverConfig& cfg, const SpectralCoeffs& v0) {
  cfg.validate();
  PathState s;
  s.vhat = resize_coeffs(v0, cfg.J);
  s.v = dst_inverse(s.vhat);
  s.t = 0.0;
  for (double x : s.v.values)
    if (!std::isfinite(x) || std::abs(x) > cfg.blowup_guard) s.blowup = true;
  return s;
}

PathState step(const PathState& state, const SolverConfig& cfg, const WienerIncrements& inc) {
  if (state.blowup) throw std::logic_error("step: path already flagged as blown up");
  if (!cfg.sigma.is_zero() && inc.dw.size() != cfg.n_modes)
    throw std::invalid_argument("step: increment size does not match n_modes");
  StepContext ctx(cfg);
  PathState next = state;
  step_inplace(next, ctx, &inc, nullptr);
  return next;
}

namespace {

Trajectory run_impl(const SolverConfig& cfg, const SpectralCoeffs& v0, const NoiseStream* noise) {
  cfg.validate();
  StepContext ctx(cfg);
  PathState state = make_initial_state(cfg, v0);

  Trajectory out;
  out.m = cfg.m;
  out.gamma = cfg.gamma_track;
  out.budget.gamma = cfg.gamma_track;

  const bool noise_on = noise != nullptr && !cfg.sigma.is_zero();
  const double t_eps = 1e-12 * std::max(1.0, cfg.T);
  double lmp1_acc = 0.0, power_acc = 0.0;
  std::size_t ri = 0;

  auto emit_due_records = [&]() {
    while (ri < cfg.record_times.size() && cfg.record_times[ri] <= state.t + t_eps) {
      out.snapshots.push_back({cfg.record_times[ri], state.t, state.vhat});
      out.lmp1_integral.push_back(lmp1_acc);
      out.power_h_integral.push_back(power_acc);
      ++ri;
    }
  };

  emit_due_records();
  while (state.t < cfg.T - t_eps && !state.blowup) {
    double dt = choose_dt(cfg, state);
    dt = std::min(dt, cfg.T - state.t);
    // Adaptive steps land exactly on record boundaries; fixed steps snap.
    if (cfg.dt_policy.kind == DtPolicy::Kind::adaptive && ri < cfg.record_times.size()) {
      const double gap = cfg.record_times[ri] - state.t;
      if (gap > t_eps) dt = std::min(dt, gap);
    }

    if (cfg.track_power_norm) {
      // Left-endpoint quadrature of the tracked time integrals.
      const double h = grid_spacing(cfg.J);
      double acc = 0.0;
      for (double x : state.v.values) acc += std::pow(std::abs(x), cfg.m + 1.0);
      lmp1_acc += dt * h * acc;
      std::vector<double> tmp(cfg.J);
      double hq = 0.0;
      ctx.pointwise_power_coeffs(state.vhat.coeffs, ctx.q, tmp, &hq);
      power_acc += dt * hq;
    }

    WienerIncrements inc;
    if (noise_on)
      inc = noise->at(state.step_count, dt);
    else
      inc.dt = dt;

    BudgetRow row;
    const bool ok = step_inplace(state, ctx, &inc, cfg.track_budget ? &row : nullptr);
    if (cfg.track_budget && ok) out.budget.rows.push_back(row);
    if (!ok) break;
    emit_due_records();
  }

  out.blowup = state.blowup;
  if (state.blowup) out.blowup_time = state.t;
  out.total_steps = state.step_count;
  return out;
}

}  // namespace

Trajectory run_path(const SolverConfig& cfg, const SpectralCoeffs& v0, const NoiseStream& noise) {
  return run_impl(cfg, v0, &noise);
}

Trajectory run_deterministic(const SolverConfig& cfg, const SpectralCoeffs& v0) {
  if (!cfg.sigma.is_zero())
    throw std::invalid_argument("run_deterministic: sigma must be identically zero");
  return run_impl(cfg, v0, nullptr);
}

GridFunction barenblatt(double m, double t, double t0, double x0, double mass_param, std::size_t J) {
  if (!(m > 1.0)) throw std::invalid_argument("barenblatt: m must be > 1");
  if (!(t0 > 0.0)) throw std::invalid_argument("barenblatt: t0 must be positive");
  const double alpha = 1.0 / (m + 1.0);
  const double kappa = (m - 1.0) * alpha / (2.0 * m);
  const double tt = t + t0;
  const double half_width = std::sqrt(mass_param / kappa) * std::pow(tt, alpha);
  if (!(x0 - half_width > 0.0 && x0 + half_width < 1.0))
    throw std::domain_error("barenblatt: support reaches the boundary of (0,1)");
  std::vector<double> vals(J);
  const double ta = std::pow(tt, -alpha);
  const double t2a = std::pow(tt, -2.0 * alpha);
  for (std::size_t j = 1; j <= J; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(J + 1);
    const double arg = mass_param - kappa * (x - x0) * (x - x0) * t2a;
    vals[j - 1] = arg > 0.0 ? ta * std::pow(arg, 1.0 / (m - 1.0)) : 0.0;
  }
  return GridFunction::unchecked(std::move(vals));
}

SpectralCoeffs constant_initial(double level, std::size_t J) {
  std::vector<double> vals(J, level);
  return dst_forward(GridFunction::unchecked(std::move(vals)));
}

SpectralCoeffs grid_initial(const GridFunction& g) { return dst_forward(g); }

}  // namespace spme
