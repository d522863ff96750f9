#include "cyclemix/transform.hpp"

#include <cmath>
#include <stdexcept>

#include "cyclemix/util.hpp"

namespace cyclemix {

Radix2Fft::Radix2Fft(std::size_t n) : n_(n) {
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("Radix2Fft: size must be a power of two");
  twiddle_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    twiddle_[j] = {std::cos(ang), std::sin(ang)};
  }
  rev_.resize(n);
  std::uint32_t bits = 0;
  while ((1u << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0, x = static_cast<std::uint32_t>(i);
    for (std::uint32_t b = 0; b < bits; ++b) { r = (r << 1) | (x & 1); x >>= 1; }
    rev_[i] = r;
  }
}

void Radix2Fft::core(std::complex<double>* a, bool inv) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = rev_[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t step = n_ / len;
    for (std::size_t blk = 0; blk < n_; blk += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        std::complex<double> w = twiddle_[j * step];
        if (inv) w = std::conj(w);
        const std::complex<double> u = a[blk + j];
        const std::complex<double> v = a[blk + j + len / 2] * w;
        a[blk + j] = u + v;
        a[blk + j + len / 2] = u - v;
      }
    }
  }
}

void Radix2Fft::forward(std::complex<double>* a) const { core(a, false); }

void Radix2Fft::inverse(std::complex<double>* a) const {
  core(a, true);
  const double s = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
}

namespace {
std::size_t next_pow2(std::size_t x) {
  std::size_t m = 1;
  while (m < x) m <<= 1;
  return m;
}
}  // namespace

ChirpZ::ChirpZ(std::size_t n_in, std::size_t n_out, std::uint64_t p)
    : n_in_(n_in), n_out_(n_out), p_(p), fft_(next_pow2(n_in + n_out - 1)) {
  if (n_in == 0 || n_out == 0 || p == 0) throw std::invalid_argument("ChirpZ: empty transform");
  const std::size_t m_max = std::max(n_in, n_out);
  chirp_.resize(m_max);
  for (std::size_t m = 0; m < m_max; ++m) {
    // m^2 mod 2p computed exactly; the residual angle is small so cos/sin
    // keep full double accuracy even for large m.
    const std::uint64_t q = mul_mod(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(m), 2 * p);
    const double ang = -(kTwoPi / 2.0) * static_cast<double>(q) / static_cast<double>(p);
    chirp_[m] = {std::cos(ang), std::sin(ang)};
  }
  // Kernel b[d] = conj(w(d)) for d = -(n_in-1) .. (n_out-1), wrapped mod M.
  const std::size_t M = fft_.size();
  kernel_hat_.assign(M, {0.0, 0.0});
  for (std::size_t d = 0; d < n_out; ++d) kernel_hat_[d] = std::conj(chirp_[d]);
  for (std::size_t d = 1; d < n_in; ++d) kernel_hat_[M - d] = std::conj(chirp_[d]);
  fft_.forward(kernel_hat_.data());
}

void ChirpZ::run(std::span<const double> c, std::span<std::complex<double>> out) const {
  if (c.size() != n_in_ || out.size() != n_out_) throw std::invalid_argument("ChirpZ::run: size mismatch");
  const std::size_t M = fft_.size();
  std::vector<std::complex<double>> work(M, {0.0, 0.0});
  for (std::size_t j = 0; j < n_in_; ++j) work[j] = c[j] * chirp_[j];
  fft_.forward(work.data());
  for (std::size_t i = 0; i < M; ++i) work[i] *= kernel_hat_[i];
  fft_.inverse(work.data());
  for (std::size_t x = 0; x < n_out_; ++x) out[x] = chirp_[x] * work[x];
}

}  // namespace cyclemix
