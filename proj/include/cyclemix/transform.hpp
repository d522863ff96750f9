// Arbitrary-length spectral synthesis: iterative radix-2 FFT plus a Bluestein
// chirp evaluator. This is the O(p log p) engine behind convolution powers on
// Z/pZ; correctness is pinned by the naive-transform oracle in the tests.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace cyclemix {

class Radix2Fft {
 public:
  explicit Radix2Fft(std::size_t n);  // n must be a power of two

  void forward(std::complex<double>* a) const;  // in place, unscaled
  void inverse(std::complex<double>* a) const;  // in place, scaled by 1/n
  std::size_t size() const { return n_; }

 private:
  void core(std::complex<double>* a, bool inv) const;

  std::size_t n_;
  std::vector<std::complex<double>> twiddle_;  // e(-j/n), j < n/2
  std::vector<std::uint32_t> rev_;
};

// Evaluates X(x) = sum_{j=0}^{n_in-1} c_j exp(-2*pi*i*j*x/p), x = 0..n_out-1,
// for arbitrary modulus p, via the chirp identity j*x = (j^2 + x^2 - (x-j)^2)/2.
// The quadratic phases are reduced mod 2p in exact integer arithmetic so the
// evaluation stays accurate for p up to 2^20 and beyond.
class ChirpZ {
 public:
  ChirpZ(std::size_t n_in, std::size_t n_out, std::uint64_t p);

  // out.size() must equal n_out; c.size() must equal n_in.
  void run(std::span<const double> c, std::span<std::complex<double>> out) const;

  std::size_t fft_size() const { return fft_.size(); }

 private:
  std::size_t n_in_, n_out_;
  std::uint64_t p_;
  Radix2Fft fft_;
  std::vector<std::complex<double>> chirp_;       // w(m) = exp(-i*pi*m^2/p)
  std::vector<std::complex<double>> kernel_hat_;  // FFT of conj(w) wrapped into length M
};

}  // namespace cyclemix
