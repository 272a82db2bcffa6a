#include "spme/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spme/dst.hpp"
#include "spme/noise.hpp"
#include "spme/solver.hpp"

namespace spme {

double Kernel::value(double s) const {
  switch (kind) {
    case KernelKind::epanechnikov:
      return std::abs(s) < 1.0 ? 0.75 * (1.0 - s * s) : 0.0;
    case KernelKind::triangle:
      return std::abs(s) < 1.0 ? 1.0 - std::abs(s) : 0.0;
    case KernelKind::custom_table: {
      if (table.empty() || s <= table.front().first || s >= table.back().first) return 0.0;
      auto it = std::upper_bound(table.begin(), table.end(), s,
                                 [](double v, const auto& knot) { return v < knot.first; });
      const auto& [s1, v1] = *it;
      const auto& [s0, v0] = *(it - 1);
      return v0 + (s - s0) / (s1 - s0) * (v1 - v0);
    }
  }
  return 0.0;
}

double Kernel::deriv(double s) const {
  switch (kind) {
    case KernelKind::epanechnikov:
      return std::abs(s) < 1.0 ? -1.5 * s : 0.0;
    case KernelKind::triangle:
      if (s == 0.0 || std::abs(s) >= 1.0) return 0.0;
      return s > 0.0 ? -1.0 : 1.0;
    case KernelKind::custom_table: {
      if (table.empty() || s <= table.front().first || s >= table.back().first) return 0.0;
      auto it = std::upper_bound(table.begin(), table.end(), s,
                                 [](double v, const auto& knot) { return v < knot.first; });
      const auto& [s1, v1] = *it;
      const auto& [s0, v0] = *(it - 1);
      return (v1 - v0) / (s1 - s0);
    }
  }
  return 0.0;
}

void Kernel::validate() const {
  double integral = 0.0;
  switch (kind) {
    case KernelKind::epanechnikov:
    case KernelKind::triangle:
      return;  // unit integral by construction
    case KernelKind::custom_table: {
      if (table.size() < 2) throw std::invalid_argument("Kernel: table needs >= 2 knots");
      for (const auto& [s, v] : table) {
        if (!std::isfinite(s) || !std::isfinite(v)) throw std::invalid_argument("Kernel: non-finite knot");
        if (v < 0.0) throw std::invalid_argument("Kernel: negative value");
        if (s < -1.0 || s > 1.0) throw std::invalid_argument("Kernel: support must lie in [-1,1]");
      }
      if (!std::is_sorted(table.begin(), table.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; }))
        throw std::invalid_argument("Kernel: knots must be ascending");
      // Exact integral of the piecewise linear interpolant.
      for (std::size_t i = 0; i + 1 < table.size(); ++i)
        integral += 0.5 * (table[i].second + table[i + 1].second) *
                    (table[i + 1].first - table[i].first);
      if (std::abs(integral - 1.0) > 1e-10)
        throw std::invalid_argument("Kernel: table must integrate to one");
      return;
    }
  }
}

Kernel Kernel::epanechnikov() { return Kernel{KernelKind::epanechnikov, {}}; }
Kernel Kernel::triangle() { return Kernel{KernelKind::triangle, {}}; }
Kernel Kernel::custom(std::vector<std::pair<double, double>> knots) {
  Kernel k{KernelKind::custom_table, std::move(knots)};
  k.validate();
  return k;
}

double OffspringLaw::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
  return m;
}

double OffspringLaw::variance() const {
  double m2 = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) m2 += static_cast<double>(k * k) * probs[k];
  const double mu = mean();
  return m2 - mu * mu;
}

void OffspringLaw::validate() const {
  if (probs.empty()) throw std::invalid_argument("OffspringLaw: empty");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("OffspringLaw: bad probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("OffspringLaw: must sum to one");
  if (std::abs(mean() - 1.0) > 1e-12)
    throw std::invalid_argument("OffspringLaw: criticality requires mean exactly one");
}

std::size_t OffspringLaw::sample(double u) const {
  double cdf = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    cdf += probs[k];
    if (u < cdf) return k;
  }
  return probs.size() - 1;
}

OffspringLaw OffspringLaw::critical_binary() { return OffspringLaw{{0.5, 0.0, 0.5}}; }
OffspringLaw OffspringLaw::identity() { return OffspringLaw{{0.0, 1.0}}; }

void ParticleConfig::validate() const {
  if (N == 0) throw std::invalid_argument("ParticleConfig: N must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("ParticleConfig: epsilon must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("ParticleConfig: dt must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("ParticleConfig: T must be nonnegative");
  if (branch_rate < 0.0) throw std::invalid_argument("ParticleConfig: branch_rate must be >= 0");
  if (drift_enabled) kernel.validate();
  if (branching_enabled) {
    offspring.validate();
    if (branch_rate * dt > 0.1)
      throw std::invalid_argument("ParticleConfig: rate*dt must be <= 0.1 (tau-leap validity)");
  }
}

DriftInfo drift_step(ParticleState& state, const ParticleConfig& cfg) {
  DriftInfo info;
  if (!cfg.drift_enabled || state.positions.size() < 2) return info;
  const double eps = cfg.epsilon;
  std::vector<double>& y = state.positions;
  std::sort(y.begin(), y.end());
  const std::size_t P = y.size();

  std::vector<double> disp(P);
  const double scale = cfg.dt / static_cast<double>(cfg.N);

  if (cfg.kernel.kind == KernelKind::epanechnikov) {
    // V'_eps(d) = -1.5 d / eps^3 on |d| < eps, so the window sum collapses
    // to counts and position sums.
    std::vector<double> prefix(P + 1, 0.0);
    for (std::size_t i = 0; i < P; ++i) prefix[i + 1] = prefix[i] + y[i];
    std::size_t lo = 0, hi = 0;
    const double c = 1.5 * scale / (eps * eps * eps);
    for (std::size_t i = 0; i < P; ++i) {
      while (lo < P && y[lo] <= y[i] - eps) ++lo;
      if (hi < i + 1) hi = i + 1;
      while (hi < P && y[hi] < y[i] + eps) ++hi;
      const double count = static_cast<double>(hi - lo);
      const double sum = prefix[hi] - prefix[lo];
      disp[i] = c * (count * y[i] - sum);
    }
  } else {
    std::size_t lo = 0, hi = 0;
    const double inv_eps2 = 1.0 / (eps * eps);
    for (std::size_t i = 0; i < P; ++i) {
      while (lo < P && y[lo] <= y[i] - eps) ++lo;
      if (hi < i + 1) hi = i + 1;
      while (hi < P && y[hi] < y[i] + eps) ++hi;
      double force = 0.0;
      for (std::size_t j = lo; j < hi; ++j) force += cfg.kernel.deriv((y[i] - y[j]) / eps) * inv_eps2;
      disp[i] = -scale * force;  // down the density gradient
    }
  }

  for (std::size_t i = 0; i < P; ++i) {
    info.max_displacement = std::max(info.max_displacement, std::abs(disp[i]));
    y[i] += disp[i];
  }
  info.under_resolved = info.max_displacement > 0.25 * eps;
  return info;
}

void branch_step(ParticleState& state, const ParticleConfig& cfg) {
  if (!cfg.branching_enabled || cfg.branch_rate == 0.0) return;
  const double prob = cfg.branch_rate * cfg.dt;
  if (prob > 0.1) throw std::invalid_argument("branch_step: rate*dt must be <= 0.1");
  std::vector<double> next;
  next.reserve(state.positions.size() + 16);
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    const auto slot = static_cast<std::uint32_t>(i);
    const double u =
        rng::uniform(cfg.seed, cfg.run_index, state.step_count, slot, rng::Tag::particle_branch);
    if (u < prob) {
      const double uo = rng::uniform(cfg.seed, cfg.run_index, state.step_count, slot,
                                     rng::Tag::particle_offspring);
      const std::size_t k = cfg.offspring.sample(uo);
      for (std::size_t c = 0; c < k; ++c) next.push_back(state.positions[i]);
    } else {
      next.push_back(state.positions[i]);
    }
  }
  state.positions.swap(next);
}

double EmpiricalMeasure::total_mass(std::size_t N) const {
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  return static_cast<double>(total) / static_cast<double>(N);
}

EmpiricalMeasure empirical_measure(const ParticleState& state, const ParticleConfig& cfg,
                                   std::size_t bins, double lo, double hi, double bandwidth) {
  if (bins == 0) throw std::invalid_argument("empirical_measure: bins must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("empirical_measure: need hi > lo");
  EmpiricalMeasure out;
  out.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    out.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  out.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double x : state.positions) {
    auto b = static_cast<std::ptrdiff_t>(std::floor((x - lo) / width));
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    ++out.counts[static_cast<std::size_t>(b)];
  }
  out.masses.resize(bins);
  for (std::size_t b = 0; b < bins; ++b)
    out.masses[b] = static_cast<double>(out.counts[b]) / static_cast<double>(cfg.N);
  out.bandwidth = bandwidth;
  if (bandwidth > 0.0) {
    out.kde.assign(bins, 0.0);
    const double inv = 1.0 / (bandwidth * static_cast<double>(cfg.N));
    Kernel smoother = Kernel::epanechnikov();
    for (std::size_t b = 0; b < bins; ++b) {
      const double center = 0.5 * (out.edges[b] + out.edges[b + 1]);
      double acc = 0.0;
      for (double x : state.positions) acc += smoother.value((center - x) / bandwidth);
      out.kde[b] = acc * inv;
    }
  }
  return out;
}

ParticleRun run_particles(const ParticleConfig& cfg, std::vector<double> initial_positions,
                          const std::vector<double>& record_times, std::size_t profile_bins,
                          double lo, double hi) {
  cfg.validate();
  if (!std::is_sorted(record_times.begin(), record_times.end()))
    throw std::invalid_argument("run_particles: record_times must be sorted");
  ParticleState state;
  state.positions = std::move(initial_positions);

  ParticleRun out;
  const double t_eps = 1e-12 * std::max(1.0, cfg.T);
  std::size_t ri = 0;
  auto record_due = [&]() {
    while (ri < record_times.size() && record_times[ri] <= state.t + t_eps) {
      out.times.push_back(record_times[ri]);
      out.population.push_back(state.alive_count());
      const double n = static_cast<double>(cfg.N);
      double m1 = 0.0, m2 = 0.0;
      for (double x : state.positions) {
        m1 += x;
        m2 += (x - 0.5) * (x - 0.5);
      }
      out.mass.push_back(static_cast<double>(state.alive_count()) / n);
      out.first_moment.push_back(m1 / n);
      out.second_moment.push_back(m2 / n);
      if (profile_bins > 0)
        out.profiles.push_back(empirical_measure(state, cfg, profile_bins, lo, hi));
      ++ri;
    }
  };

  record_due();
  while (state.t < cfg.T - t_eps) {
    const DriftInfo info = drift_step(state, cfg);
    if (info.under_resolved) ++out.drift_warnings;
    branch_step(state, cfg);
    state.t += cfg.dt;
    state.step_count += 1;
    record_due();
    if (state.positions.empty()) break;  // extinct population
  }
  return out;
}

std::vector<double> stratified_sample(const std::function<double(double)>& density, std::size_t N,
                                      double lo, double hi) {
  const std::size_t cells = 8192;
  std::vector<double> cdf(cells + 1, 0.0);
  const double h = (hi - lo) / static_cast<double>(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = density(lo + h * static_cast<double>(i));
    const double b = density(lo + h * static_cast<double>(i + 1));
    cdf[i + 1] = cdf[i] + 0.5 * h * (a + b);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw std::invalid_argument("stratified_sample: density has no mass");
  std::vector<double> out(N);
  std::size_t cell = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double target = total * (static_cast<double>(i) + 0.5) / static_cast<double>(N);
    while (cell + 1 < cells && cdf[cell + 1] < target) ++cell;
    const double seg = cdf[cell + 1] - cdf[cell];
    const double w = seg > 0.0 ? (target - cdf[cell]) / seg : 0.5;
    out[i] = lo + h * (static_cast<double>(cell) + w);
  }
  return out;
}

double bump_density(double x, double c, double w) {
  const double s = (x - c) / w;
  return s * s < 1.0 ? 0.75 / w * (1.0 - s * s) : 0.0;
}

namespace {

struct MeanCi {
  std::vector<double> mean, ci;
};

MeanCi reduce_series(const std::vector<std::vector<double>>& rows) {
  MeanCi out;
  const std::size_t n = rows.size();
  const std::size_t len = rows.front().size();
  out.mean.assign(len, 0.0);
  out.ci.assign(len, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[i];
    const double mean = sum / static_cast<double>(n);
    out.mean[i] = mean;
    if (n >= 2) {
      double ss = 0.0;
      for (const auto& r : rows) ss += (r[i] - mean) * (r[i] - mean);
      out.ci[i] = 1.96 * std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
  }
  return out;
}

}  // namespace

ParticleSpdeComparison compare_to_spde(const std::vector<ParticleRun>& particle_runs,
                                       const std::vector<Trajectory>& spde_runs,
                                       std::size_t bins, double lo, double hi) {
  if (particle_runs.empty() || spde_runs.empty())
    throw std::invalid_argument("compare_to_spde: need at least one run on each side");
  const std::vector<double>& times = particle_runs.front().times;
  for (const auto& run : particle_runs)
    if (run.times != times) throw std::invalid_argument("compare_to_spde: particle time grids differ");
  const double horizon_tol = 1e-9 * std::max(1.0, times.back());
  for (const auto& traj : spde_runs) {
    if (traj.snapshots.size() != times.size())
      throw std::invalid_argument("compare_to_spde: mismatched horizons");
    for (std::size_t i = 0; i < times.size(); ++i)
      if (std::abs(traj.snapshots[i].t_nominal - times[i]) > horizon_tol)
        throw std::invalid_argument("compare_to_spde: mismatched horizons");
  }

  ParticleSpdeComparison out;
  out.times = times;
  const std::size_t n_times = times.size();

  std::vector<std::vector<double>> p_mass, p_m2;
  for (const auto& run : particle_runs) {
    p_mass.push_back(run.mass);
    p_m2.push_back(run.second_moment);
  }
  MeanCi pm = reduce_series(p_mass), p2 = reduce_series(p_m2);
  out.particle_mass_mean = pm.mean;
  out.particle_mass_ci = pm.ci;
  out.particle_m2_mean = p2.mean;
  out.particle_m2_ci = p2.ci;

  const std::size_t J = spde_runs.front().snapshots.front().vhat.size();
  std::vector<std::vector<double>> s_mass(spde_runs.size()), s_m2(spde_runs.size());
  std::vector<std::vector<double>> mean_profile(n_times, std::vector<double>(J, 0.0));
  out.min_spde_value = std::numeric_limits<double>::infinity();
  out.t_boundary_estimate = std::numeric_limits<double>::infinity();
  const std::size_t edge = std::max<std::size_t>(1, J / 20);
  double initial_mass = 0.0;
  for (std::size_t r = 0; r < spde_runs.size(); ++r) {
    s_mass[r].resize(n_times);
    s_m2[r].resize(n_times);
    for (std::size_t i = 0; i < n_times; ++i) {
      GridFunction g = dst_inverse(spde_runs[r].snapshots[i].vhat);
      const double h = grid_spacing(J);
      double mass = 0.0, m2 = 0.0, outer = 0.0;
      for (std::size_t j = 0; j < J; ++j) {
        const double x = g.node(j);
        mass += g.values[j];
        m2 += (x - 0.5) * (x - 0.5) * g.values[j];
        out.min_spde_value = std::min(out.min_spde_value, g.values[j]);
        if (j < edge || j + edge >= J) outer += std::abs(g.values[j]);
        mean_profile[i][j] += g.values[j] / static_cast<double>(spde_runs.size());
      }
      s_mass[r][i] = mass * h;
      s_m2[r][i] = m2 * h;
      if (r == 0 && i == 0) initial_mass = std::abs(mass * h);
      if (outer * h > 1e-3 * std::max(initial_mass, 1e-300))
        out.t_boundary_estimate = std::min(out.t_boundary_estimate, times[i]);
    }
  }
  MeanCi sm = reduce_series(s_mass), s2 = reduce_series(s_m2);
  out.spde_mass_mean = sm.mean;
  out.spde_mass_ci = sm.ci;
  out.spde_m2_mean = s2.mean;
  out.spde_m2_ci = s2.ci;

  for (std::size_t i = 0; i < n_times; ++i) {
    if (!pm.ci.empty() && std::isfinite(pm.ci[i]) && std::isfinite(sm.ci[i]) && pm.ci[i] > 0.0 &&
        sm.ci[i] > 0.0) {
      ++out.mass_band_total;
      if (std::abs(pm.mean[i] - sm.mean[i]) <= pm.ci[i] + sm.ci[i]) ++out.mass_band_overlap;
    }
  }

  // L1 distance between mean densities on shared bins.
  out.profile_l1.assign(n_times, std::numeric_limits<double>::quiet_NaN());
  const bool have_profiles = !particle_runs.front().profiles.empty();
  if (have_profiles && bins > 0) {
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i < n_times; ++i) {
      std::vector<double> p_density(bins, 0.0);
      for (const auto& run : particle_runs)
        for (std::size_t b = 0; b < bins; ++b)
          p_density[b] += run.profiles[i].masses[b] / width / static_cast<double>(particle_runs.size());
      std::vector<double> s_density(bins, 0.0);
      std::vector<std::size_t> node_count(bins, 0);
      for (std::size_t j = 0; j < J; ++j) {
        const double x = (static_cast<double>(j) + 1.0) / static_cast<double>(J + 1);
        if (x < lo || x >= hi) continue;
        auto b = static_cast<std::size_t>((x - lo) / width);
        b = std::min(b, bins - 1);
        s_density[b] += mean_profile[i][j];
        ++node_count[b];
      }
      double l1 = 0.0;
      for (std::size_t b = 0; b < bins; ++b) {
        const double sd = node_count[b] > 0 ? s_density[b] / static_cast<double>(node_count[b]) : 0.0;
        l1 += std::abs(p_density[b] - sd) * width;
      }
      out.profile_l1[i] = l1;
    }
  }
  return out;
}

}  // namespace spme
