#include "spme/dst.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace spme {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::map<std::size_t, std::shared_ptr<const SineTransform>>& plan_cache() {
  static std::map<std::size_t, std::shared_ptr<const SineTransform>> cache;
  return cache;
}
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SineTransform::SineTransform(std::size_t J) : J_(J), period_(2 * (J + 1)) {
  if (J == 0) throw std::invalid_argument("SineTransform: J must be positive");
  use_fft_ = is_pow2(J + 1);
  const double pi = std::numbers::pi;
  sin_table_.resize(period_);
  for (std::size_t t = 0; t < period_; ++t)
    sin_table_[t] = std::sin(pi * static_cast<double>(t) / static_cast<double>(J + 1));
  if (use_fft_) {
    const std::size_t n = period_;
    twiddle_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double ang = -2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
      twiddle_[j] = {std::cos(ang), std::sin(ang)};
    }
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      bitrev_[i] = r;
    }
  }
}

std::shared_ptr<const SineTransform> SineTransform::plan(std::size_t J) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto& cache = plan_cache();
  auto it = cache.find(J);
  if (it != cache.end()) return it->second;
  auto p = std::make_shared<const SineTransform>(J);
  cache.emplace(J, p);
  return p;
}

// Unnormalized DST-I core: out_k = sum_{j=1..J} in_j sin(pi jk/(J+1)), k = 1..J.
void SineTransform::dst1(const double* in, double* out) const {
  if (!use_fft_) {
    for (std::size_t k = 1; k <= J_; ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= J_; ++j) acc += in[j - 1] * sine(k, j);
      out[k - 1] = acc;
    }
    return;
  }
  // Odd extension of length n = 2(J+1); the DFT is purely imaginary and
  // S_k = -Im(Z_k)/2.
  const std::size_t n = period_;
  std::vector<std::complex<double>> z(n);
  z[0] = 0.0;
  z[J_ + 1] = 0.0;
  for (std::size_t j = 1; j <= J_; ++j) {
    z[j] = in[j - 1];
    z[n - j] = -in[j - 1];
  }
  // Iterative radix-2 FFT with precomputed twiddles.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = bitrev_[i];
    if (i < r) std::swap(z[i], z[r]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> w = twiddle_[j * stride];
        const std::complex<double> a = z[start + j];
        const std::complex<double> b = z[start + j + len / 2] * w;
        z[start + j] = a + b;
        z[start + j + len / 2] = a - b;
      }
    }
  }
  for (std::size_t k = 1; k <= J_; ++k) out[k - 1] = -0.5 * z[k].imag();
}

void SineTransform::forward_raw(const double* in, double* out) const {
  dst1(in, out);
  const double scale = std::numbers::sqrt2 / static_cast<double>(J_ + 1);
  for (std::size_t k = 0; k < J_; ++k) out[k] *= scale;
}

void SineTransform::inverse_raw(const double* in, double* out) const {
  dst1(in, out);
  for (std::size_t j = 0; j < J_; ++j) out[j] *= std::numbers::sqrt2;
}

SpectralCoeffs SineTransform::forward(const GridFunction& g) const {
  if (g.size() != J_) throw std::invalid_argument("SineTransform::forward: size mismatch");
  std::vector<double> out(J_);
  forward_raw(g.values.data(), out.data());
  return SpectralCoeffs::unchecked(std::move(out));
}

GridFunction SineTransform::inverse(const SpectralCoeffs& c) const {
  if (c.size() != J_) throw std::invalid_argument("SineTransform::inverse: size mismatch");
  std::vector<double> out(J_);
  inverse_raw(c.coeffs.data(), out.data());
  return GridFunction::unchecked(std::move(out));
}

SpectralCoeffs dst_forward(const GridFunction& g) { return SineTransform::plan(g.size())->forward(g); }

GridFunction dst_inverse(const SpectralCoeffs& c) { return SineTransform::plan(c.size())->inverse(c); }

}  // namespace spme
