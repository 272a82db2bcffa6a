#pragma once

#include <cstddef>
#include <functional>

#include "spme/types.hpp"

namespace spme {

// Dirichlet eigenvalue lambda_k = (pi k)^2 of -Delta on (0,1), k >= 1.
double eigenvalue(std::size_t k);

// (-Delta)^beta in coefficient space: out_k = lambda_k^beta c_k.
SpectralCoeffs fractional_laplacian(const SpectralCoeffs& c, FractionalExponent beta);

// ||v||_{H^gamma} = sqrt(sum_k lambda_k^gamma c_k^2).
double h_gamma_norm(const SpectralCoeffs& c, double gamma);
double h_gamma_norm_sq(const SpectralCoeffs& c, double gamma);

// ((1/(J+1)) sum_j |v_j|^p)^{1/p}; rectangle quadrature of the L^p norm.
double lp_norm(const GridFunction& g, double p);

// |r|^{q-1} r, the odd power.
double signed_power(double r, double q);
GridFunction signed_power(const GridFunction& g, double q);

// integral of v over (0,1) from coefficients: sum_k c_k * sqrt(2)(1-(-1)^k)/(pi k).
double integral(const SpectralCoeffs& c);

// Pointwise evaluation of the truncated series at x in [0,1] (O(J)).
double evaluate_at(const SpectralCoeffs& c, double x);

// Zero-pad or truncate a coefficient vector to length J_new.
SpectralCoeffs resize_coeffs(const SpectralCoeffs& c, std::size_t J_new);

// Synthesize nodal values of the expansion on the grid with J_grid nodes
// (coefficients zero-padded or truncated as needed).
GridFunction synthesize(const SpectralCoeffs& c, std::size_t J_grid);

// Pseudo-spectral evaluation of a pointwise map f on an oversampled grid:
// synthesize on the grid with oversample*(J+1)-1 nodes, apply f nodewise,
// transform back. Output has J_keep coefficients (J_keep may exceed the
// input length to retain high modes of the product).
SpectralCoeffs apply_pointwise(const SpectralCoeffs& c, const std::function<double(double, double)>& f,
                               int oversample, std::size_t J_keep);

struct InterpolationReport {
  double lhs = 0.0;   // ||v||_{H^gamma}, gamma = (1-theta) gamma0 + theta gamma1
  double rhs = 0.0;   // ||v||_{H^gamma0}^{1-theta} ||v||_{H^gamma1}^theta
  bool holds = false;
};

// Interpolation inequality between H^gamma norms (exact Hoelder at the
// coefficient level). Requires gamma0 < gamma1, theta in (0,1), c nonzero.
InterpolationReport check_interpolation(const SpectralCoeffs& c, double gamma0, double gamma1,
                                        double theta);

}  // namespace spme
