#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "spme/types.hpp"

namespace spme {

// Discrete sine transform (DST-I) between nodal values on the interior grid
// and sine-basis coefficients. Normalized so that sampling e^k yields the
// k-th unit coordinate vector:
//
//   forward:  c_k = sqrt(2)/(J+1) * sum_j v_j sin(pi k j/(J+1))
//   inverse:  v_j = sqrt(2)       * sum_k c_k sin(pi k j/(J+1))
//
// FFT-backed (odd extension to length 2(J+1)) when J+1 is a power of two,
// direct O(J^2) with a precomputed sine table otherwise. Plans are immutable
// after construction and safe to share across threads.
class SineTransform {
 public:
  explicit SineTransform(std::size_t J);

  // Process-wide plan cache keyed by J.
  static std::shared_ptr<const SineTransform> plan(std::size_t J);

  std::size_t size() const { return J_; }

  SpectralCoeffs forward(const GridFunction& g) const;
  GridFunction inverse(const SpectralCoeffs& c) const;

  // Raw in/out of length J; no validation. `out` must not alias `in`.
  void forward_raw(const double* in, double* out) const;
  void inverse_raw(const double* in, double* out) const;

  // sin(pi k j / (J+1)) for 1-based k, j; exact table lookup.
  double sine(std::size_t k, std::size_t j) const { return sin_table_[((k * j) % period_)]; }

 private:
  void dst1(const double* in, double* out) const;  // out_k = sum_j in_j sin(pi jk/(J+1))

  std::size_t J_;
  std::size_t period_;  // 2(J+1)
  bool use_fft_;
  std::vector<double> sin_table_;                 // sin(pi t/(J+1)), t = 0..2J+1
  std::vector<std::complex<double>> twiddle_;     // FFT twiddles, length period_/2
  std::vector<std::size_t> bitrev_;               // bit-reversal permutation
};

SpectralCoeffs dst_forward(const GridFunction& g);
GridFunction dst_inverse(const SpectralCoeffs& c);

}  // namespace spme
