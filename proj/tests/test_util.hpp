#pragma once

#include <cstdint>
#include <vector>

#include "spme/noise.hpp"
#include "spme/types.hpp"

namespace spme::test {

// Deterministic pseudo-random inputs for property tests, addressed by
// (seed, case index, slot) so sweeps are reproducible.
inline double test_gaussian(std::uint64_t seed, std::uint64_t case_index, std::uint32_t slot) {
  return rng::gaussian(seed, case_index, 0, slot, rng::Tag::test_sweep);
}
inline double test_uniform(std::uint64_t seed, std::uint64_t case_index, std::uint32_t slot) {
  return rng::uniform(seed, case_index, 0, slot, rng::Tag::test_sweep);
}

// Random coefficient vector with decaying spectrum c_k ~ N(0,1) k^{-decay}.
inline SpectralCoeffs random_coeffs(std::size_t J, std::uint64_t seed, std::uint64_t case_index,
                                    double decay = 1.0) {
  std::vector<double> c(J);
  for (std::size_t k = 1; k <= J; ++k)
    c[k - 1] = test_gaussian(seed, case_index, static_cast<std::uint32_t>(k)) /
               std::pow(static_cast<double>(k), decay);
  return SpectralCoeffs::unchecked(std::move(c));
}

inline GridFunction random_grid(std::size_t J, std::uint64_t seed, std::uint64_t case_index,
                                double decay = 1.0);

}  // namespace spme::test

#include "spme/dst.hpp"

namespace spme::test {
inline GridFunction random_grid(std::size_t J, std::uint64_t seed, std::uint64_t case_index,
                                double decay) {
  return dst_inverse(random_coeffs(J, seed, case_index, decay));
}
}  // namespace spme::test
