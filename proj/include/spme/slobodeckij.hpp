#pragma once

#include <cstddef>

#include "spme/types.hpp"

namespace spme {

// Gagliardo double integral int int |v(x)-v(y)|^p / |x-y|^{1+gamma p} dx dy
// over (0,1)^2 by trapezoid quadrature on the grid extended with the
// Dirichlet boundary nodes; the removable diagonal is excluded.
double gagliardo_double_integral(const GridFunction& g, double gamma, double p);

// Slobodeckij norm (||v||_{L^p}^p + double integral)^{1/p}, gamma in (0,1), p > 1.
double slobodeckij_norm(const GridFunction& g, double gamma, double p);

struct PowerRegularityCheck {
  double lhs = 0.0;     // ||v||^{2 m_tilde}_{W^{gamma_tilde/m_tilde, 2 m_tilde}}
  double rhs = 0.0;     // constant * ||v^{[m_tilde]}||^2_{W^{gamma_tilde, 2}}
  double margin = 0.0;  // rhs - lhs
  bool holds = false;
  double power_norm_spectral = 0.0;  // ||v^{[m_tilde]}||^2_{H^{gamma_tilde}} for reference
};

// Checks ||v||^{2m~}_{W^{g~/m~, 2m~}} <= constant * ||v^{[m~]}||^2_{W^{g~,2}}
// with both sides evaluated as Slobodeckij functionals on the same grid, so
// the bound is inherited term by term from the scalar inequality
// |a-b|^{2m~} <= constant |a^{[m~]} - b^{[m~]}|^2.
PowerRegularityCheck power_regularity_check(const GridFunction& v, double m_tilde, double gamma_tilde,
                                            double constant);

}  // namespace spme
