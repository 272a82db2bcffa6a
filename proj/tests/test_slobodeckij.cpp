#include <cmath>

#include "doctest.h"
#include "spme/dst.hpp"
#include "spme/slobodeckij.hpp"
#include "spme/spectral.hpp"
#include "test_util.hpp"

using namespace spme;

TEST_CASE("slobodeckij norm: zero function, homogeneity, rejection") {
  CHECK(slobodeckij_norm(GridFunction::zeros(31), 0.25, 2.0) == 0.0);

  GridFunction g = test::random_grid(63, 5, 0, 1.0);
  GridFunction g2 = g;
  for (auto& v : g2.values) v *= 2.0;
  const double a = slobodeckij_norm(g, 0.3, 2.5);
  const double b = slobodeckij_norm(g2, 0.3, 2.5);
  CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-12));

  CHECK_THROWS_AS(slobodeckij_norm(g, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(slobodeckij_norm(g, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(slobodeckij_norm(g, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("slobodeckij norm of e^1 agrees with oversampled quadrature oracle to 1%") {
  const std::size_t J = 127;
  const double gamma = 0.25, p = 2.0;
  GridFunction g = dst_inverse(SpectralCoeffs::mode(1, J));
  const double value = slobodeckij_norm(g, gamma, p);
  // Independent oracle: same double integral evaluated on a 4x oversampled
  // grid (the integrand of e^1 is smooth away from the removable diagonal).
  const std::size_t Jf = 4 * (J + 1) - 1;
  GridFunction fine = synthesize(SpectralCoeffs::mode(1, J), Jf);
  const double oracle = slobodeckij_norm(fine, gamma, p);
  CHECK(std::abs(value - oracle) <= 0.01 * oracle);
}

TEST_CASE("power regularity check holds snapshot-wise with the scalar constant") {
  // m~ = 1.5 (m = 2), gamma~ = 0.25: certified bound with constant 2^{2(m~-1)} = 2.
  const std::size_t J = 63;
  const double m_tilde = 1.5, gamma_tilde = 0.25;
  const double constant = std::pow(2.0, 2.0 * (m_tilde - 1.0));
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    GridFunction v = test::random_grid(J, 77, trial, 1.2);
    auto chk = power_regularity_check(v, m_tilde, gamma_tilde, constant);
    CHECK(chk.holds);
  }
  CHECK_THROWS_AS(power_regularity_check(GridFunction::zeros(7), 1.0, 0.25, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(power_regularity_check(GridFunction::zeros(7), 2.0, 0.75, 4.0),
                  std::invalid_argument);
}
