#include "spme/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spme/dst.hpp"

namespace spme {

double eigenvalue(std::size_t k) {
  const double pk = std::numbers::pi * static_cast<double>(k);
  return pk * pk;
}

SpectralCoeffs fractional_laplacian(const SpectralCoeffs& c, FractionalExponent beta) {
  std::vector<double> out(c.size());
  for (std::size_t k = 1; k <= c.size(); ++k)
    out[k - 1] = std::pow(eigenvalue(k), beta.beta) * c.coeffs[k - 1];
  return SpectralCoeffs::unchecked(std::move(out));
}

double h_gamma_norm_sq(const SpectralCoeffs& c, double gamma) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k >= 1; --k) {
    const double ck = c.coeffs[k - 1];
    acc += std::pow(eigenvalue(k), gamma) * ck * ck;
  }
  return acc;
}

double h_gamma_norm(const SpectralCoeffs& c, double gamma) { return std::sqrt(h_gamma_norm_sq(c, gamma)); }

double lp_norm(const GridFunction& g, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double h = grid_spacing(g.size());
  double acc = 0.0;
  if (p == 2.0) {
    for (double v : g.values) acc += v * v;
  } else if (p == 1.0) {
    for (double v : g.values) acc += std::abs(v);
  } else {
    for (double v : g.values) acc += std::pow(std::abs(v), p);
  }
  return std::pow(h * acc, 1.0 / p);
}

double signed_power(double r, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("signed_power: q must be positive");
  if (r == 0.0) return 0.0;
  return r < 0.0 ? -std::pow(-r, q) : std::pow(r, q);
}

GridFunction signed_power(const GridFunction& g, double q) {
  std::vector<double> out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = signed_power(g.values[j], q);
  return GridFunction::unchecked(std::move(out));
}

double integral(const SpectralCoeffs& c) {
  // int_0^1 e^k dx = sqrt(2)(1 - cos(pi k))/(pi k); even modes vanish.
  double acc = 0.0;
  for (std::size_t k = c.size(); k >= 1; --k) {
    if (k % 2 == 0) continue;
    acc += c.coeffs[k - 1] * 2.0 * std::numbers::sqrt2 / (std::numbers::pi * static_cast<double>(k));
  }
  return acc;
}

double evaluate_at(const SpectralCoeffs& c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k >= 1; --k)
    acc += c.coeffs[k - 1] * std::numbers::sqrt2 * std::sin(std::numbers::pi * static_cast<double>(k) * x);
  return acc;
}

SpectralCoeffs resize_coeffs(const SpectralCoeffs& c, std::size_t J_new) {
  std::vector<double> out(J_new, 0.0);
  const std::size_t n = std::min(J_new, c.size());
  std::copy_n(c.coeffs.begin(), n, out.begin());
  return SpectralCoeffs::unchecked(std::move(out));
}

GridFunction synthesize(const SpectralCoeffs& c, std::size_t J_grid) {
  return dst_inverse(resize_coeffs(c, J_grid));
}

SpectralCoeffs apply_pointwise(const SpectralCoeffs& c, const std::function<double(double, double)>& f,
                               int oversample, std::size_t J_keep) {
  if (oversample < 1) throw std::invalid_argument("apply_pointwise: oversample must be >= 1");
  const std::size_t J = c.size();
  const std::size_t J_fine = static_cast<std::size_t>(oversample) * (J + 1) - 1;
  GridFunction fine = synthesize(c, J_fine);
  for (std::size_t j = 0; j < J_fine; ++j) fine.values[j] = f(fine.node(j), fine.values[j]);
  SpectralCoeffs full = dst_forward(fine);
  return resize_coeffs(full, J_keep);
}

InterpolationReport check_interpolation(const SpectralCoeffs& c, double gamma0, double gamma1,
                                        double theta) {
  if (!(gamma0 < gamma1)) throw std::invalid_argument("check_interpolation: need gamma0 < gamma1");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("check_interpolation: theta in (0,1)");
  double sq = 0.0;
  for (double x : c.coeffs) sq += x * x;
  if (sq == 0.0) throw std::invalid_argument("check_interpolation: zero coefficient vector");
  const double gamma = (1.0 - theta) * gamma0 + theta * gamma1;
  InterpolationReport rep;
  rep.lhs = h_gamma_norm(c, gamma);
  rep.rhs = std::pow(h_gamma_norm(c, gamma0), 1.0 - theta) * std::pow(h_gamma_norm(c, gamma1), theta);
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12);
  return rep;
}

}  // namespace spme
