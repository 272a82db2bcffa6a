#include "spme/slobodeckij.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "spme/dst.hpp"
#include "spme/spectral.hpp"

namespace spme {

namespace {

// |x_i - x_j|^{-(1+gamma p)} for the extended grid 0..J+1, cached per
// (J, gamma*p). Only the distance |i-j| = 1..J+1 matters.
struct DistanceKernel {
  std::vector<double> pow_inv;  // index d = |i-j|, entry d=0 unused
};

std::shared_ptr<const DistanceKernel> distance_kernel(std::size_t J, double exponent) {
  static std::map<std::pair<std::size_t, double>, std::shared_ptr<const DistanceKernel>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(J, exponent);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto k = std::make_shared<DistanceKernel>();
  const double h = grid_spacing(J);
  k->pow_inv.resize(J + 2, 0.0);
  for (std::size_t d = 1; d <= J + 1; ++d)
    k->pow_inv[d] = std::pow(static_cast<double>(d) * h, -exponent);
  cache.emplace(key, k);
  return k;
}

inline double abs_pow(double d, double p, bool p_is_2, bool p_is_3) {
  d = std::abs(d);
  if (p_is_2) return d * d;
  if (p_is_3) return d * d * d;
  return std::pow(d, p);
}

}  // namespace

double gagliardo_double_integral(const GridFunction& g, double gamma, double p) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gagliardo: gamma must be in (0,1)");
  if (!(p > 1.0)) throw std::invalid_argument("gagliardo: p must be > 1");
  const std::size_t J = g.size();
  const double h = grid_spacing(J);
  auto kernel = distance_kernel(J, 1.0 + gamma * p);
  const bool p2 = std::abs(p - 2.0) < 1e-14;
  const bool p3 = std::abs(p - 3.0) < 1e-14;

  // Extended nodes 0..J+1 with v = 0 at both ends; trapezoid weights are
  // h except h/2 at the ends. Sum over ordered pairs i < j, doubled.
  const std::size_t n = J + 2;
  std::vector<double> v(n, 0.0);
  for (std::size_t j = 0; j < J; ++j) v[j + 1] = g.values[j];
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double wj = (j == n - 1) ? 0.5 : 1.0;
      row += wj * abs_pow(v[i] - v[j], p, p2, p3) * kernel->pow_inv[j - i];
    }
    acc += wi * row;
  }
  return 2.0 * h * h * acc;
}

double slobodeckij_norm(const GridFunction& g, double gamma, double p) {
  const double lp = lp_norm(g, p);
  return std::pow(std::pow(lp, p) + gagliardo_double_integral(g, gamma, p), 1.0 / p);
}

PowerRegularityCheck power_regularity_check(const GridFunction& v, double m_tilde, double gamma_tilde,
                                            double constant) {
  if (!(m_tilde > 1.0)) throw std::invalid_argument("power_regularity_check: m_tilde must be > 1");
  if (!(gamma_tilde > 0.0 && gamma_tilde < 0.5))
    throw std::invalid_argument("power_regularity_check: gamma_tilde must be in (0,1/2)");
  const double p_lhs = 2.0 * m_tilde;
  const double g_lhs = gamma_tilde / m_tilde;
  GridFunction w = signed_power(v, m_tilde);

  PowerRegularityCheck out;
  const double lp = lp_norm(v, p_lhs);
  out.lhs = std::pow(lp, p_lhs) + gagliardo_double_integral(v, g_lhs, p_lhs);
  const double l2w = lp_norm(w, 2.0);
  out.rhs = constant * (l2w * l2w + gagliardo_double_integral(w, gamma_tilde, 2.0));
  out.margin = out.rhs - out.lhs;
  out.holds = out.margin >= -1e-10 * (std::abs(out.lhs) + std::abs(out.rhs) + 1.0);
  out.power_norm_spectral = h_gamma_norm_sq(dst_forward(w), gamma_tilde);
  return out;
}

}  // namespace spme
