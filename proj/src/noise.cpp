#include "spme/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spme/dst.hpp"
#include "spme/sigma.hpp"

namespace spme {
namespace rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> round_once(const std::array<std::uint32_t, 4>& c,
                                               const std::array<std::uint32_t, 2>& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline std::array<std::uint32_t, 4> make_counter(std::uint64_t step, std::uint32_t slot, Tag tag,
                                                 std::uint64_t stream) {
  const std::uint32_t tagged_slot = (static_cast<std::uint32_t>(tag) << 24) ^ slot;
  return {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32), tagged_slot,
          static_cast<std::uint32_t>(stream)};
}

inline std::array<std::uint32_t, 2> make_key(std::uint64_t seed, std::uint64_t stream) {
  return {static_cast<std::uint32_t>(seed) ^ static_cast<std::uint32_t>(stream >> 32),
          static_cast<std::uint32_t>(seed >> 32)};
}

inline double to_unit_open(std::uint64_t bits) {  // (0, 1]
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1p-53;
}
inline double to_unit_halfopen(std::uint64_t bits) {  // [0, 1)
  return static_cast<double>(bits >> 11) * 0x1p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    counter = round_once(counter, key);
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return counter;
}

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint32_t slot,
               Tag tag) {
  const auto w = philox4x32(make_counter(step, slot, tag, stream), make_key(seed, stream));
  const std::uint64_t bits = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
  return to_unit_halfopen(bits);
}

double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint32_t slot,
                Tag tag) {
  const auto w = philox4x32(make_counter(step, slot, tag, stream), make_key(seed, stream));
  const std::uint64_t b0 = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
  const std::uint64_t b1 = (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
  const double u1 = to_unit_open(b0);
  const double u2 = to_unit_halfopen(b1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rng

NoiseStream::NoiseStream(NoiseConfig cfg) : cfg_(cfg) {
  if (cfg_.n_modes == 0) throw std::invalid_argument("NoiseStream: n_modes must be positive");
  if (!(cfg_.dt > 0.0)) throw std::invalid_argument("NoiseStream: dt must be positive");
}

double NoiseStream::unit_normal(std::uint64_t step, std::size_t k) const {
  return rng::gaussian(cfg_.master_seed, cfg_.path_index, step, static_cast<std::uint32_t>(k),
                       rng::Tag::wiener);
}

WienerIncrements NoiseStream::at(std::uint64_t step, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("NoiseStream::at: dt must be positive");
  WienerIncrements inc;
  inc.step_index = step;
  inc.dt = dt;
  inc.dw.resize(cfg_.n_modes);
  const double s = std::sqrt(dt);
  for (std::size_t k = 1; k <= cfg_.n_modes; ++k) inc.dw[k - 1] = s * unit_normal(step, k);
  return inc;
}

NoiseStream derive_stream(const NoiseConfig& cfg) { return NoiseStream(cfg); }

GridFunction noise_field(const GridFunction& v, const SigmaSpec& sigma, const WienerIncrements& inc) {
  const std::size_t J = v.size();
  if (inc.dw.size() > J) throw std::invalid_argument("noise_field: more modes than grid nodes");
  std::vector<double> padded(J, 0.0);
  std::copy(inc.dw.begin(), inc.dw.end(), padded.begin());
  // sum_k e^k(x_j) dw_k is the inverse sine transform of the padded vector.
  GridFunction s = dst_inverse(SpectralCoeffs::unchecked(std::move(padded)));
  std::vector<double> out(J);
  for (std::size_t j = 0; j < J; ++j) out[j] = sigma(v.node(j), v.values[j]) * s.values[j];
  return GridFunction::unchecked(std::move(out));
}

}  // namespace spme
