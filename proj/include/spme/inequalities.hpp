#pragma once

#include <cstddef>

#include "spme/report.hpp"
#include "spme/sigma.hpp"
#include "spme/types.hpp"

namespace spme {

// Two-sided bracket of N(gamma~) = 2 sum_l lambda_l^{gamma~}: partial sum
// plus integral tail bounds (the summand is positive and decreasing).
struct KrylovInterval {
  double lower = 0.0;
  double upper = 0.0;
  double partial = 0.0;  // bare partial sum, itself a loose lower bound
  double gamma_tilde = 0.0;
  std::size_t terms = 0;

  double width() const { return upper - lower; }
  // Certified constant for use on the right-hand side of the lemma.
  double value() const { return upper; }
};

// Requires gamma_tilde < -1/2 (the series diverges otherwise).
KrylovInterval krylov_constant(double gamma_tilde, std::size_t terms = 100000);

// sum_{k<=modes} ||u e^k||^2_{H^gamma~} <= N(gamma~) ||u||^2_{L^2};
// products are formed pointwise on an oversampled grid.
InequalityReport verify_krylov(const GridFunction& u, double gamma_tilde, std::size_t modes,
                               int oversample = 4);

// int u^{[m]} (-Delta)^beta u >= (4m/(m+1)^2) int |(-Delta)^{beta/2} u^{[(m+1)/2]}|^2
// for band-limited u; beta in (0,1/2), m >= 1 (m = 1 is the identity case).
InequalityReport verify_stroock_varopoulos(const SpectralCoeffs& u, double m, double beta,
                                           int oversample = 4);
InequalityReport verify_stroock_varopoulos(const GridFunction& u, double m, double beta,
                                           int oversample = 4);

// (a-b)(a^{[m]} - b^{[m]}) >= (4m/(m+1)^2) |a^{[(m+1)/2]} - b^{[(m+1)/2]}|^2, exact scalars.
InequalityReport verify_pointwise_monotonicity(double a, double b, double m);

// Brute-force sup of |a-b|^{2m~} / |a^{[m~]} - b^{[m~]}|^2; by scale and sign
// symmetry the scan fixes a = 1, b in [-1,1].
struct PowerRegularityConstant {
  double sup_ratio = 0.0;
  double argmax_b = 0.0;
  double m_tilde = 0.0;
};
PowerRegularityConstant power_regularity_constant(double m_tilde, std::size_t scan_points = 200001);

// Checks the declared growth bound |sigma| <= K + delta |r|^{(m+1)/2} and,
// when delta_bar is declared, the power-Lipschitz bound, on a dense scan.
InequalityReport validate_sigma(const SigmaSpec& sigma, double m, const ScanSpec& scan = {});

// Joint monotonicity of (A,B):
// -2 int (v1-v2)(v1^{[m]}-v2^{[m]}) + sum_{k<=modes} ||(sigma(v1)-sigma(v2)) e^k||^2_{H^-1} <= 0.
// Warns (does not fail) when delta_bar is absent or exceeds 24m/(m+1)^2.
InequalityReport verify_operator_monotonicity(const GridFunction& v1, const GridFunction& v2,
                                              double m, const SigmaSpec& sigma, std::size_t modes,
                                              int oversample = 4);

// Joint coercivity of (A,B):
// -2||v||^{m+1}_{L^{m+1}} + sum_{k<=modes} ||sigma(v) e^k||^2_{H^-1}
//   <= -(2 - c0 delta2) ||v||^{m+1}_{L^{m+1}} + c0 C(delta2),  c0 = 1/3.
// Warns when the effective quadratic growth delta2 reaches 2/c0 = 6.
InequalityReport verify_coercivity(const GridFunction& v, double m, const SigmaSpec& sigma,
                                   std::size_t modes, int oversample = 4);

// Certified bound for the first smallness condition on delta:
// 1/(m N(gamma)); gamma < -1/2 required. The second smallness condition of
// the a priori lemma has no explicit constant and is not quantified here.
double delta_threshold(double gamma, double m);

}  // namespace spme
