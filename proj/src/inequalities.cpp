#include "spme/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spme/dst.hpp"
#include "spme/spectral.hpp"

namespace spme {

namespace {

constexpr double kC0 = 1.0 / 3.0;  // N(-1)

double sv_constant(double m) { return 4.0 * m / ((m + 1.0) * (m + 1.0)); }

double nonlinear_tol(double lhs, double rhs) { return 1e-6 * (std::abs(lhs) + std::abs(rhs) + 1.0); }

// ||phi e^k||^2_{H^s} with the product formed on the (already fine) grid of
// phi; coefficients taken to the full grid resolution.
double mode_product_norm_sq(const GridFunction& phi, std::size_t k, double s,
                            const SineTransform& plan, std::vector<double>& scratch,
                            std::vector<double>& coeff) {
  const std::size_t Jf = phi.size();
  scratch.resize(Jf);
  coeff.resize(Jf);
  for (std::size_t j = 1; j <= Jf; ++j)
    scratch[j - 1] = phi.values[j - 1] * std::numbers::sqrt2 * plan.sine(k, j);
  plan.forward_raw(scratch.data(), coeff.data());
  double acc = 0.0;
  for (std::size_t l = Jf; l >= 1; --l) acc += std::pow(eigenvalue(l), s) * coeff[l - 1] * coeff[l - 1];
  return acc;
}

}  // namespace

KrylovInterval krylov_constant(double gamma_tilde, std::size_t terms) {
  if (!(gamma_tilde < -0.5))
    throw std::invalid_argument("krylov_constant: series diverges for gamma_tilde >= -1/2");
  if (terms < 1) throw std::invalid_argument("krylov_constant: terms must be >= 1");
  KrylovInterval out;
  out.gamma_tilde = gamma_tilde;
  out.terms = terms;
  double acc = 0.0;
  for (std::size_t l = terms; l >= 1; --l) acc += 2.0 * std::pow(eigenvalue(l), gamma_tilde);
  out.partial = acc;
  const double e = 2.0 * gamma_tilde + 1.0;  // < 0
  auto tail_integral = [&](double a) {
    return -2.0 * std::pow(std::numbers::pi, 2.0 * gamma_tilde) * std::pow(a, e) / e;
  };
  out.lower = acc + tail_integral(static_cast<double>(terms + 1));
  out.upper = acc + tail_integral(static_cast<double>(terms));
  return out;
}

InequalityReport verify_krylov(const GridFunction& u, double gamma_tilde, std::size_t modes,
                               int oversample) {
  const std::size_t J = u.size();
  if (modes > J) throw std::invalid_argument("verify_krylov: modes must be <= J");
  const KrylovInterval N = krylov_constant(gamma_tilde);

  const std::size_t Jf = static_cast<std::size_t>(oversample) * (J + 1) - 1;
  GridFunction fine = synthesize(dst_forward(u), Jf);
  auto plan = SineTransform::plan(Jf);
  std::vector<double> scratch, coeff;
  double lhs = 0.0;
  for (std::size_t k = 1; k <= modes; ++k)
    lhs += mode_product_norm_sq(fine, k, gamma_tilde, *plan, scratch, coeff);

  const double l2 = lp_norm(u, 2.0);
  InequalityReport rep;
  rep.name = "krylov";
  rep.lhs = lhs;
  rep.rhs = N.value() * l2 * l2;
  rep.margin = rep.rhs - rep.lhs;
  rep.tolerance = nonlinear_tol(rep.lhs, rep.rhs);
  rep.finalize();
  rep.set_meta("gamma_tilde", gamma_tilde);
  rep.set_meta("modes", static_cast<double>(modes));
  rep.set_meta("J", static_cast<double>(J));
  rep.set_meta("oversample", static_cast<double>(oversample));
  rep.set_meta("N_const", N.value());
  return rep;
}

InequalityReport verify_stroock_varopoulos(const SpectralCoeffs& u, double m, double beta,
                                           int oversample) {
  if (!(beta > 0.0 && beta < 0.5))
    throw std::invalid_argument("verify_stroock_varopoulos: beta must be in (0,1/2)");
  if (!(m >= 1.0)) throw std::invalid_argument("verify_stroock_varopoulos: m must be >= 1");
  const std::size_t J = u.size();
  const std::size_t Jf = static_cast<std::size_t>(oversample) * (J + 1) - 1;

  GridFunction fine = synthesize(u, Jf);
  GridFunction wm = signed_power(fine, m);
  GridFunction wq = signed_power(fine, 0.5 * (m + 1.0));
  SpectralCoeffs wm_hat = dst_forward(wm);
  SpectralCoeffs wq_hat = dst_forward(wq);

  double lhs = 0.0;
  for (std::size_t k = J; k >= 1; --k)
    lhs += std::pow(eigenvalue(k), beta) * u.coeffs[k - 1] * wm_hat.coeffs[k - 1];
  double rhs = 0.0;
  for (std::size_t k = Jf; k >= 1; --k)
    rhs += std::pow(eigenvalue(k), beta) * wq_hat.coeffs[k - 1] * wq_hat.coeffs[k - 1];
  rhs *= sv_constant(m);

  InequalityReport rep;
  rep.name = "stroock_varopoulos";
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.margin = lhs - rhs;  // expected nonnegative
  rep.tolerance = nonlinear_tol(lhs, rhs);
  rep.finalize();
  rep.set_meta("m", m);
  rep.set_meta("beta", beta);
  rep.set_meta("J", static_cast<double>(J));
  rep.set_meta("oversample", static_cast<double>(oversample));
  return rep;
}

InequalityReport verify_stroock_varopoulos(const GridFunction& u, double m, double beta,
                                           int oversample) {
  return verify_stroock_varopoulos(dst_forward(u), m, beta, oversample);
}

InequalityReport verify_pointwise_monotonicity(double a, double b, double m) {
  const double q = 0.5 * (m + 1.0);
  const double lhs = (a - b) * (signed_power(a, m) - signed_power(b, m));
  const double d = signed_power(a, q) - signed_power(b, q);
  const double rhs = sv_constant(m) * d * d;
  InequalityReport rep;
  rep.name = "pointwise_monotonicity";
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.margin = lhs - rhs;
  // Near a = b both sides cancel to O((a-b)^2 scale); rounding noise lives at
  // the homogeneity scale (|a|+|b|)^{m+1}, not at |lhs|+|rhs|.
  rep.tolerance = 1e-12 * std::pow(std::abs(a) + std::abs(b), m + 1.0);
  rep.finalize();
  rep.set_meta("a", a);
  rep.set_meta("b", b);
  rep.set_meta("m", m);
  return rep;
}

PowerRegularityConstant power_regularity_constant(double m_tilde, std::size_t scan_points) {
  if (!(m_tilde >= 1.0)) throw std::invalid_argument("power_regularity_constant: m_tilde must be >= 1");
  PowerRegularityConstant out;
  out.m_tilde = m_tilde;
  auto ratio = [&](double b) {
    const double num = std::pow(std::abs(1.0 - b), 2.0 * m_tilde);
    const double den_root = 1.0 - signed_power(b, m_tilde);
    return num / (den_root * den_root);
  };
  // Uniform scan of b in [-1,1), a = 1 (scale and sign symmetry); the
  // diagonal b = 1 is the removable 0/0 point.
  double best = 0.0, arg = -1.0;
  for (std::size_t i = 0; i < scan_points; ++i) {
    const double b = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(scan_points);
    const double r = ratio(b);
    if (r > best) {
      best = r;
      arg = b;
    }
  }
  // Geometric refinement toward the corner b = -1 and the origin.
  for (int i = 0; i < 200; ++i) {
    const double eps = std::pow(10.0, -12.0 + 12.0 * i / 199.0);
    for (double b : {-1.0 + eps, -eps, eps}) {
      const double r = ratio(b);
      if (r > best) {
        best = r;
        arg = b;
      }
    }
  }
  out.sup_ratio = best;
  out.argmax_b = arg;
  return out;
}

InequalityReport validate_sigma(const SigmaSpec& sigma, double m, const ScanSpec& scan) {
  if (sigma.kind == SigmaKind::table)
    for (const auto& [r, s] : sigma.table)
      if (!std::isfinite(r) || !std::isfinite(s))
        throw std::invalid_argument("validate_sigma: non-finite table entry");

  const double q = 0.5 * (m + 1.0);
  const auto rs = scan.r_values();
  const auto xs = scan.x_values();

  double growth_violation = -std::numeric_limits<double>::infinity();
  double sigma_scale = 0.0;
  for (double r : rs)
    for (double x : xs) {
      const double s = std::abs(sigma(x, r));
      sigma_scale = std::max(sigma_scale, s);
      growth_violation =
          std::max(growth_violation, s - (sigma.K + sigma.delta * std::pow(std::abs(r), q)));
    }

  InequalityReport rep;
  rep.name = "sigma_growth";
  rep.lhs = growth_violation;
  rep.rhs = 0.0;
  rep.margin = -growth_violation;
  rep.tolerance = 1e-10 * (sigma_scale + 1.0);
  rep.set_meta("kind", sigma.describe());
  rep.set_meta("m", m);
  rep.set_meta("K", sigma.K);
  rep.set_meta("delta", sigma.delta);

  if (sigma.delta_bar.has_value()) {
    // Power-Lipschitz bound on a coarser pair scan.
    double lip_violation = -std::numeric_limits<double>::infinity();
    const std::size_t stride = std::max<std::size_t>(1, rs.size() / 240);
    for (std::size_t i = 0; i < rs.size(); i += stride)
      for (std::size_t j = 0; j < rs.size(); j += stride) {
        const double r = rs[i], rb = rs[j];
        for (double x : xs) {
          const double d = std::abs(sigma(x, r) - sigma(x, rb));
          const double bound = *sigma.delta_bar * std::abs(signed_power(r, q) - signed_power(rb, q));
          lip_violation = std::max(lip_violation, d - bound);
        }
      }
    rep.set_meta("delta_bar", *sigma.delta_bar);
    rep.set_meta("lipschitz_violation", lip_violation);
    rep.margin = std::min(rep.margin, -lip_violation);
  }

  // Sub-critical power growth: report the achievable (delta, K) trade-off.
  if (sigma.kind == SigmaKind::power && sigma.mprime < q - 1e-12) {
    for (double d : {1e-3, 1e-2, 1e-1}) {
      double K_needed = 0.0;
      for (double r : rs)
        K_needed = std::max(K_needed,
                            std::abs(sigma(0.5, r)) - d * std::pow(std::abs(r), q));
      rep.set_meta("K(delta=" + format_double(d) + ")", K_needed);
    }
  }
  rep.finalize();
  return rep;
}

namespace {

// Common core of the operator checks: fine-grid synthesis plus the mode sum
// sum_{k<=modes} ||phi e^k||^2_{H^-1}.
double mode_sum_hminus1(const GridFunction& phi, std::size_t modes) {
  auto plan = SineTransform::plan(phi.size());
  std::vector<double> scratch, coeff;
  double acc = 0.0;
  for (std::size_t k = 1; k <= modes; ++k)
    acc += mode_product_norm_sq(phi, k, -1.0, *plan, scratch, coeff);
  return acc;
}

}  // namespace

InequalityReport verify_operator_monotonicity(const GridFunction& v1, const GridFunction& v2,
                                              double m, const SigmaSpec& sigma, std::size_t modes,
                                              int oversample) {
  if (v1.size() != v2.size())
    throw std::invalid_argument("verify_operator_monotonicity: size mismatch");
  const std::size_t J = v1.size();
  const std::size_t Jf = static_cast<std::size_t>(oversample) * (J + 1) - 1;
  GridFunction u1 = synthesize(dst_forward(v1), Jf);
  GridFunction u2 = synthesize(dst_forward(v2), Jf);

  const double h = grid_spacing(Jf);
  double drift = 0.0;
  std::vector<double> phi(Jf);
  for (std::size_t j = 0; j < Jf; ++j) {
    drift += (u1.values[j] - u2.values[j]) * (signed_power(u1.values[j], m) - signed_power(u2.values[j], m));
    const double x = u1.node(j);
    phi[j] = sigma(x, u1.values[j]) - sigma(x, u2.values[j]);
  }
  drift *= -2.0 * h;
  GridFunction phig = GridFunction::unchecked(std::move(phi));
  const double noise = mode_sum_hminus1(phig, std::min(modes, Jf));
  const double c0_route = drift + kC0 * std::pow(lp_norm(phig, 2.0), 2.0);

  const double threshold = 24.0 * m / ((m + 1.0) * (m + 1.0));
  InequalityReport rep;
  rep.name = "operator_monotonicity";
  rep.lhs = drift + noise;
  rep.rhs = 0.0;
  rep.margin = -rep.lhs;
  rep.tolerance = nonlinear_tol(drift, noise);
  rep.finalize();
  rep.warning = !sigma.delta_bar.has_value() || *sigma.delta_bar > threshold;
  rep.set_meta("m", m);
  rep.set_meta("modes", static_cast<double>(std::min(modes, Jf)));
  rep.set_meta("drift_term", drift);
  rep.set_meta("noise_term", noise);
  rep.set_meta("c0_route", c0_route);
  rep.set_meta("delta_bar_threshold", threshold);
  if (sigma.delta_bar.has_value()) rep.set_meta("delta_bar", *sigma.delta_bar);
  return rep;
}

InequalityReport verify_coercivity(const GridFunction& v, double m, const SigmaSpec& sigma,
                                   std::size_t modes, int oversample) {
  const std::size_t J = v.size();
  const std::size_t Jf = static_cast<std::size_t>(oversample) * (J + 1) - 1;
  GridFunction u = synthesize(dst_forward(v), Jf);

  const double lmp1 = std::pow(lp_norm(u, m + 1.0), m + 1.0);
  std::vector<double> sig(Jf);
  for (std::size_t j = 0; j < Jf; ++j) sig[j] = sigma(u.node(j), u.values[j]);
  GridFunction sigg = GridFunction::unchecked(std::move(sig));
  const double noise = mode_sum_hminus1(sigg, std::min(modes, Jf));

  const QuadraticGrowth qg = quadratic_growth(sigma, m, ScanSpec{});
  const double mu = 2.0 - kC0 * qg.delta2;
  const double M = kC0 * qg.offset;

  InequalityReport rep;
  rep.name = "coercivity";
  rep.lhs = -2.0 * lmp1 + noise;
  rep.rhs = -mu * lmp1 + M;
  rep.margin = rep.rhs - rep.lhs;
  rep.tolerance = nonlinear_tol(rep.lhs, rep.rhs);
  rep.finalize();
  rep.warning = qg.delta2 >= 6.0;
  rep.set_meta("m", m);
  rep.set_meta("modes", static_cast<double>(std::min(modes, Jf)));
  rep.set_meta("delta2", qg.delta2);
  rep.set_meta("offset_C", qg.offset);
  rep.set_meta("mu", mu);
  rep.set_meta("M", M);
  rep.set_meta("c0", kC0);
  return rep;
}

double delta_threshold(double gamma, double m) {
  if (!(gamma < -0.5)) throw std::invalid_argument("delta_threshold: gamma must be < -1/2");
  if (!(m > 1.0)) throw std::invalid_argument("delta_threshold: m must be > 1");
  return 1.0 / (m * krylov_constant(gamma).value());
}

}  // namespace spme
