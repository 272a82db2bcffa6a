#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "spme/types.hpp"

namespace spme {
namespace rng {

// Philox4x32-10 counter-based generator (Salmon et al.). A keyed bijection
// of the 128-bit counter; every draw is a pure function of (key, counter),
// so streams can be consumed in any order on any schedule.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Purpose tags carve independent substreams out of one master seed.
enum class Tag : std::uint32_t {
  wiener = 1,
  particle_branch = 2,
  particle_offspring = 3,
  init_sample = 4,
  test_sweep = 5,
};

// Uniform on [0,1) determined by (seed, stream, step, slot, tag).
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint32_t slot, Tag tag);
// Standard normal via Box-Muller on the same addressing.
double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint32_t slot, Tag tag);

}  // namespace rng

// Parameters of one truncated space-time white noise stream: n independent
// Wiener processes driving sine modes e^1..e^n.
struct NoiseConfig {
  std::size_t n_modes = 1;
  double dt = 1.0;
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

struct WienerIncrements {
  std::vector<double> dw;  // dw[k-1] ~ N(0, dt), independent across k
  std::uint64_t step_index = 0;
  double dt = 0.0;
};

// Random-access stream of Wiener increments; increments are fully determined
// by (master_seed, path_index, step_index, mode) and may be fetched in any
// order.
class NoiseStream {
 public:
  explicit NoiseStream(NoiseConfig cfg);

  const NoiseConfig& config() const { return cfg_; }
  WienerIncrements at(std::uint64_t step) const { return at(step, cfg_.dt); }
  WienerIncrements at(std::uint64_t step, double dt) const;
  // Underlying unit normal for mode k (1-based) at a step.
  double unit_normal(std::uint64_t step, std::size_t k) const;

 private:
  NoiseConfig cfg_;
};

NoiseStream derive_stream(const NoiseConfig& cfg);

// sigma(x, v(x)) * sum_{k<=n} e^k(x) dw_k on the grid of v. The mode sum is
// synthesized with a single inverse transform of the zero-padded increments.
struct SigmaSpec;
GridFunction noise_field(const GridFunction& v, const SigmaSpec& sigma, const WienerIncrements& inc);

}  // namespace spme
