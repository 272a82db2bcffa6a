#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spme/dst.hpp"
#include "spme/spectral.hpp"
#include "test_util.hpp"

using namespace spme;

TEST_CASE("fractional laplacian scales single modes by eigenvalue powers") {
  const std::size_t J = 31;
  // e^1, beta = 1/2: multiplied by pi.
  SpectralCoeffs c1 = fractional_laplacian(SpectralCoeffs::mode(1, J), FractionalExponent(0.5));
  CHECK(c1.coeffs[0] == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  // e^2, beta = 1: multiplied by 4 pi^2.
  SpectralCoeffs c2 = fractional_laplacian(SpectralCoeffs::mode(2, J), FractionalExponent(1.0));
  CHECK(c2.coeffs[1] == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
  // beta = 0 is the identity.
  SpectralCoeffs c = test::random_coeffs(J, 1, 0);
  SpectralCoeffs id = fractional_laplacian(c, FractionalExponent(0.0));
  for (std::size_t k = 0; k < J; ++k) CHECK(id.coeffs[k] == c.coeffs[k]);
}

TEST_CASE("fractional powers form a semigroup in the exponent") {
  const std::size_t J = 63;
  SpectralCoeffs c = test::random_coeffs(J, 2, 5);
  for (double b1 : {-1.0, -0.5, 0.5}) {
    for (double b2 : {0.25, 1.0}) {
      SpectralCoeffs two = fractional_laplacian(fractional_laplacian(c, FractionalExponent(b1)),
                                                FractionalExponent(b2));
      SpectralCoeffs one = fractional_laplacian(c, FractionalExponent(b1 + b2));
      for (std::size_t k = 0; k < J; ++k)
        CHECK(std::abs(two.coeffs[k] - one.coeffs[k]) <= 1e-12 * std::abs(one.coeffs[k]) + 1e-300);
    }
  }
}

TEST_CASE("(-Delta)^{beta/2} is an isometry H^gamma -> H^{gamma-beta}") {
  const std::size_t J = 63;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    SpectralCoeffs c = test::random_coeffs(J, 13, trial, 0.8);
    for (double beta : {-1.0, -0.5, 0.5, 1.0}) {
      const double gamma = 0.3;
      SpectralCoeffs mapped = fractional_laplacian(c, FractionalExponent(beta / 2.0));
      const double lhs = h_gamma_norm(mapped, gamma - beta);
      const double rhs = h_gamma_norm(c, gamma);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
  }
}

TEST_CASE("h_gamma_norm single mode values") {
  const std::size_t J = 15;
  for (double gamma : {-1.0, -0.75, 0.0, 0.37}) {
    const double val = h_gamma_norm(SpectralCoeffs::mode(1, J), gamma);
    CHECK(val == doctest::Approx(std::pow(std::numbers::pi, gamma)).epsilon(1e-13));
  }
  // e^1 + e^2 at gamma = 0: Parseval gives sqrt(2).
  SpectralCoeffs c = SpectralCoeffs::zeros(J);
  c.coeffs[0] = 1.0;
  c.coeffs[1] = 1.0;
  CHECK(h_gamma_norm(c, 0.0) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-14));
  // gamma = -1 on e^1: 1/pi.
  CHECK(h_gamma_norm(SpectralCoeffs::mode(1, J), -1.0) ==
        doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("lp_norm basics") {
  CHECK(lp_norm(GridFunction::zeros(9), 2.0) == 0.0);
  const std::size_t J = 19;
  GridFunction c = GridFunction::zeros(J);
  for (auto& v : c.values) v = 3.0;
  // constant c > 0, p = 1: c * J/(J+1).
  CHECK(lp_norm(c, 1.0) == doctest::Approx(3.0 * double(J) / double(J + 1)).epsilon(1e-14));
  // e^1 samples, p = 2: 1 within O(1/J) (exact on the grid, in fact).
  GridFunction e1 = dst_inverse(SpectralCoeffs::mode(1, 127));
  CHECK(lp_norm(e1, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm(c, 0.5), std::invalid_argument);
}

TEST_CASE("signed_power definition, oddness, monotonicity") {
  CHECK(signed_power(-2.0, 2.0) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(signed_power(0.0, 3.7) == 0.0);
  CHECK(signed_power(3.0, 1.5) == doctest::Approx(std::pow(3.0, 1.5)).epsilon(1e-15));
  CHECK_THROWS_AS(signed_power(1.0, 0.0), std::invalid_argument);

  // Odd and strictly increasing on a scan of 1e5 points in [-100, 100].
  const std::size_t n = 100000;
  for (double q : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    double prev = -std::numeric_limits<double>::infinity();
    bool odd_ok = true, mono_ok = true;
    for (std::size_t i = 0; i <= n; ++i) {
      const double r = -100.0 + 200.0 * double(i) / double(n);
      const double v = signed_power(r, q);
      odd_ok = odd_ok && (std::abs(v + signed_power(-r, q)) <= 1e-12 * (std::abs(v) + 1e-300));
      mono_ok = mono_ok && (v > prev || (v == prev && v == 0.0 && prev == 0.0));
      if (v > prev) prev = v;
    }
    CHECK(odd_ok);
    CHECK(mono_ok);
  }
}

TEST_CASE("interpolation inequality: equality on a single mode, rejects bad input") {
  const std::size_t J = 31;
  InterpolationReport single = check_interpolation(SpectralCoeffs::mode(4, J), -1.0, 1.0, 0.5);
  CHECK(single.holds);
  CHECK(single.lhs == doctest::Approx(single.rhs).epsilon(1e-12));

  SpectralCoeffs c = SpectralCoeffs::zeros(J);
  c.coeffs[0] = 1.0;
  c.coeffs[1] = 1.0;
  InterpolationReport two = check_interpolation(c, -1.0, 0.0, 0.5);
  CHECK(two.holds);
  CHECK(two.lhs <= two.rhs * (1.0 + 1e-12));

  CHECK_THROWS_AS(check_interpolation(c, 0.5, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(check_interpolation(c, -1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(check_interpolation(c, -1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(check_interpolation(SpectralCoeffs::zeros(J), -1.0, 1.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("interpolation inequality holds on a random sweep") {
  const std::size_t J = 63;
  const std::pair<double, double> gammas[] = {{-1.0, 0.0}, {-1.0, 1.0}, {0.0, 1.0}};
  std::size_t checked = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    SpectralCoeffs c = test::random_coeffs(J, 31, trial, 0.5);
    for (auto [g0, g1] : gammas) {
      for (double theta : {0.25, 0.5, 0.75}) {
        CHECK(check_interpolation(c, g0, g1, theta).holds);
        ++checked;
      }
    }
  }
  CHECK(checked == 9000);
}

TEST_CASE("apply_pointwise computes aliasing-controlled products") {
  // u = e^1: u^2 has exact coefficients computable analytically; compare a
  // quadratic nonlinearity against direct high-resolution quadrature.
  const std::size_t J = 31;
  SpectralCoeffs u = SpectralCoeffs::mode(1, J);
  SpectralCoeffs sq = apply_pointwise(
      u, [](double, double v) { return v * v; }, 4, J);
  // (e^1)^2 = 2 sin^2(pi x) = 1 - cos(2 pi x); coefficients: integral against e^k.
  const std::size_t fine = 2047;
  GridFunction g = synthesize(u, fine);
  for (auto& v : g.values) v = v * v;
  SpectralCoeffs oracle = resize_coeffs(dst_forward(g), J);
  // (e^1)^2 is not band-limited; 4x oversampling leaves O(J^-3) aliasing.
  for (std::size_t k = 0; k < J; ++k) CHECK(std::abs(sq.coeffs[k] - oracle.coeffs[k]) < 1e-6);
}

TEST_CASE("integral of coefficients matches quadrature") {
  const std::size_t J = 255;
  SpectralCoeffs c = test::random_coeffs(J, 17, 4, 1.5);
  GridFunction g = dst_inverse(c);
  double quad = 0.0;
  for (double v : g.values) quad += v;
  quad *= grid_spacing(J);
  // Rectangle quadrature of a band-limited function carries an O(J^-2)
  // per-mode error; sanity agreement only.
  CHECK(integral(c) == doctest::Approx(quad).epsilon(1e-3));
  // Boundary values of the synthesized series vanish identically.
  CHECK(std::abs(evaluate_at(c, 0.0)) < 1e-12);
  CHECK(std::abs(evaluate_at(c, 1.0)) < 1e-12);
}
