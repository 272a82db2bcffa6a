#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spme {

// Nodal values of a function on the uniform interior grid of (0,1),
// x_j = j/(J+1) for j = 1..J. Homogeneous Dirichlet values at x = 0 and
// x = 1 are implicit and never stored.
struct GridFunction {
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) throw std::invalid_argument("GridFunction: empty grid");
    for (double x : values)
      if (!std::isfinite(x)) throw std::invalid_argument("GridFunction: non-finite entry");
  }

  static GridFunction zeros(std::size_t J) {
    GridFunction g;
    g.values.assign(J, 0.0);
    return g;
  }
  // Skips the finiteness scan; solver hot path with its own blow-up guard.
  static GridFunction unchecked(std::vector<double> v) {
    GridFunction g;
    g.values = std::move(v);
    return g;
  }

  std::size_t size() const { return values.size(); }
  double node(std::size_t j) const {  // j is 0-based
    return static_cast<double>(j + 1) / static_cast<double>(values.size() + 1);
  }
};

// Coefficients in the Dirichlet sine basis e^k(x) = sqrt(2) sin(pi k x),
// entry k-1 holding (v, e^k)_{L^2}.
struct SpectralCoeffs {
  std::vector<double> coeffs;

  SpectralCoeffs() = default;
  explicit SpectralCoeffs(std::vector<double> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw std::invalid_argument("SpectralCoeffs: empty");
    for (double x : coeffs)
      if (!std::isfinite(x)) throw std::invalid_argument("SpectralCoeffs: non-finite entry");
  }

  static SpectralCoeffs zeros(std::size_t J) {
    SpectralCoeffs c;
    c.coeffs.assign(J, 0.0);
    return c;
  }
  static SpectralCoeffs unchecked(std::vector<double> c) {
    SpectralCoeffs out;
    out.coeffs = std::move(c);
    return out;
  }
  // Unit coefficient vector for mode k (1-based) in a length-J expansion.
  static SpectralCoeffs mode(std::size_t k, std::size_t J) {
    if (k < 1 || k > J) throw std::invalid_argument("SpectralCoeffs::mode: k out of range");
    SpectralCoeffs c = zeros(J);
    c.coeffs[k - 1] = 1.0;
    return c;
  }

  std::size_t size() const { return coeffs.size(); }
};

// Order of the fractional power (-Delta)^beta; any real, negative included.
struct FractionalExponent {
  double beta = 0.0;
  FractionalExponent() = default;
  explicit FractionalExponent(double b) : beta(b) {
    if (!std::isfinite(b)) throw std::invalid_argument("FractionalExponent: non-finite");
  }
};

inline double grid_spacing(std::size_t J) { return 1.0 / static_cast<double>(J + 1); }

}  // namespace spme
