#include "spme/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spme/spectral.hpp"

namespace spme {

double SigmaSpec::operator()(double /*x*/, double r) const {
  switch (kind) {
    case SigmaKind::constant:
      return K;
    case SigmaKind::power:
      return lambda * signed_power(r, mprime);
    case SigmaKind::sqrt_positive_part:
      return r > 0.0 ? lambda * std::sqrt(r) : 0.0;
    case SigmaKind::table: {
      if (table.empty()) return 0.0;
      if (r <= table.front().first) return table.front().second;
      if (r >= table.back().first) return table.back().second;
      auto it = std::upper_bound(table.begin(), table.end(), r,
                                 [](double value, const auto& knot) { return value < knot.first; });
      const auto& [r1, s1] = *it;
      const auto& [r0, s0] = *(it - 1);
      const double w = (r - r0) / (r1 - r0);
      return s0 + w * (s1 - s0);
    }
  }
  return 0.0;
}

SigmaSpec SigmaSpec::zero() { return constant(0.0); }

SigmaSpec SigmaSpec::constant(double K) {
  SigmaSpec s;
  s.kind = SigmaKind::constant;
  s.K = K;
  s.delta = 0.0;
  s.delta_bar = 0.0;
  return s;
}

SigmaSpec SigmaSpec::power(double lambda, double mprime, double m) {
  if (!(mprime > 0.0)) throw std::invalid_argument("SigmaSpec::power: mprime must be positive");
  SigmaSpec s;
  s.kind = SigmaKind::power;
  s.lambda = lambda;
  s.mprime = mprime;
  const double q = 0.5 * (m + 1.0);
  if (std::abs(mprime - q) < 1e-12) {
    s.K = 0.0;
    s.delta = std::abs(lambda);
    s.delta_bar = std::abs(lambda);  // exact identity for the matched exponent
  } else {
    // Declared constants for a sub-critical exponent; see validate_sigma for
    // the achievable (K, delta) trade-off.
    s.K = std::abs(lambda);
    s.delta = std::abs(lambda);
  }
  return s;
}

SigmaSpec SigmaSpec::sqrt_pp(double lambda, double m) {
  SigmaSpec s;
  s.kind = SigmaKind::sqrt_positive_part;
  s.lambda = lambda;
  // sqrt(r+) <= 1 + |r|^{(m+1)/2} whenever (m+1)/2 >= 1/2, i.e. any m >= 0.
  if (!(m >= 0.0)) throw std::invalid_argument("SigmaSpec::sqrt_pp: bad m");
  s.K = std::abs(lambda);
  s.delta = std::abs(lambda);
  return s;
}

SigmaSpec SigmaSpec::from_table(std::vector<std::pair<double, double>> knots, double K, double delta) {
  if (knots.empty()) throw std::invalid_argument("SigmaSpec::from_table: empty table");
  for (const auto& [r, s] : knots)
    if (!std::isfinite(r) || !std::isfinite(s))
      throw std::invalid_argument("SigmaSpec::from_table: non-finite entry");
  if (!std::is_sorted(knots.begin(), knots.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; }))
    throw std::invalid_argument("SigmaSpec::from_table: knots must be ascending in r");
  SigmaSpec s;
  s.kind = SigmaKind::table;
  s.table = std::move(knots);
  s.K = K;
  s.delta = delta;
  return s;
}

std::string SigmaSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case SigmaKind::constant:
      os << "constant(" << K << ")";
      break;
    case SigmaKind::power:
      os << "power(lambda=" << lambda << ", mprime=" << mprime << ")";
      break;
    case SigmaKind::sqrt_positive_part:
      os << "sqrt_pp(lambda=" << lambda << ")";
      break;
    case SigmaKind::table:
      os << "table(" << table.size() << " knots)";
      break;
  }
  return os.str();
}

std::vector<double> ScanSpec::r_values() const {
  std::vector<double> out;
  out.reserve(2 * (uniform_points + geometric_points) + 1);
  out.push_back(0.0);
  for (std::size_t i = 0; i < geometric_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(geometric_points - 1);
    const double r = r_min_geometric * std::pow(r_max / r_min_geometric, t);
    out.push_back(r);
    out.push_back(-r);
  }
  for (std::size_t i = 1; i <= uniform_points; ++i) {
    const double r = r_max * static_cast<double>(i) / static_cast<double>(uniform_points);
    out.push_back(r);
    out.push_back(-r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> ScanSpec::x_values() const {
  std::vector<double> out;
  const std::size_t n = std::max<std::size_t>(1, x_stations);
  for (std::size_t i = 1; i <= n; ++i)
    out.push_back(static_cast<double>(i) / static_cast<double>(n + 1));
  return out;
}

QuadraticGrowth quadratic_growth(const SigmaSpec& sigma, double m, const ScanSpec& scan) {
  QuadraticGrowth out;
  switch (sigma.kind) {
    case SigmaKind::constant:
      out.delta2 = 0.0;
      out.offset = sigma.K * sigma.K;
      return out;
    case SigmaKind::power:
      if (std::abs(sigma.mprime - 0.5 * (m + 1.0)) < 1e-12) {
        out.delta2 = sigma.lambda * sigma.lambda;
        out.offset = 0.0;
        return out;
      }
      break;
    default:
      break;
  }
  // Asymptotic ratio |sigma|^2 / |r|^{m+1} over the outer decade of the scan,
  // then the offset needed to cover the whole scan.
  const auto rs = scan.r_values();
  const auto xs = scan.x_values();
  double d2 = 0.0;
  for (double r : rs) {
    if (std::abs(r) < 0.1 * scan.r_max) continue;
    for (double x : xs) {
      const double s = sigma(x, r);
      d2 = std::max(d2, s * s / std::pow(std::abs(r), m + 1.0));
    }
  }
  double C = 0.0;
  for (double r : rs)
    for (double x : xs) {
      const double s = sigma(x, r);
      C = std::max(C, s * s - d2 * std::pow(std::abs(r), m + 1.0));
    }
  out.delta2 = d2;
  out.offset = C;
  return out;
}

}  // namespace spme
