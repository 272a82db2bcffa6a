#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spme/types.hpp"

namespace spme {

enum class SigmaKind { constant, power, sqrt_positive_part, table };

// Diffusion coefficient sigma(x,r) together with its declared growth
// constants: |sigma(x,r)| <= K + delta |r|^{(m+1)/2}, and optionally the
// power-Lipschitz constant delta_bar with
// |sigma(x,r)-sigma(x,rbar)| <= delta_bar |r^{[(m+1)/2]} - rbar^{[(m+1)/2]}|.
struct SigmaSpec {
  SigmaKind kind = SigmaKind::constant;
  double K = 0.0;      // declared additive growth constant
  double delta = 0.0;  // declared multiplicative growth constant
  std::optional<double> delta_bar;
  double lambda = 0.0;  // amplitude for power / sqrt kinds
  double mprime = 1.0;  // growth exponent for the power kind
  std::vector<std::pair<double, double>> table;  // (r, sigma) knots, r ascending

  double operator()(double x, double r) const;
  bool is_zero() const { return kind == SigmaKind::constant && K == 0.0; }

  static SigmaSpec zero();
  static SigmaSpec constant(double K);
  // sigma(r) = lambda r^{[mprime]}; declared constants filled for the
  // exponent-matched case mprime = (m+1)/2.
  static SigmaSpec power(double lambda, double mprime, double m);
  static SigmaSpec sqrt_pp(double lambda, double m);  // lambda sqrt(max(r,0))
  static SigmaSpec from_table(std::vector<std::pair<double, double>> knots, double K, double delta);

  std::string describe() const;
};

// Range specification for validation scans: geometric clusters near zero
// plus a uniform cover up to r_max, evaluated at a handful of x stations.
struct ScanSpec {
  double r_max = 100.0;
  std::size_t uniform_points = 2001;
  std::size_t geometric_points = 200;
  double r_min_geometric = 1e-8;
  std::size_t x_stations = 5;

  std::vector<double> r_values() const;  // symmetric about 0, includes 0
  std::vector<double> x_values() const;
};

// Effective quadratic growth pair (delta2, C): |sigma(x,r)|^2 <=
// delta2 |r|^{m+1} + C on the scan, with delta2 the asymptotic ratio.
struct QuadraticGrowth {
  double delta2 = 0.0;
  double offset = 0.0;  // C(delta2)
};
QuadraticGrowth quadratic_growth(const SigmaSpec& sigma, double m, const ScanSpec& scan);

}  // namespace spme
