// Shared error types and modular/number-theoretic helpers.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cyclemix {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Invalid input (bad parameters, broken type invariants). CLI exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem size exceeds a documented capacity cap. CLI exit code 3.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

inline std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  std::uint64_t c = n | 1;
  while (!is_prime(c)) c += 2;
  return c;
}

// Modular inverse mod prime p.
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw ValidationError("inv_mod: zero has no inverse mod " + std::to_string(p));
  return pow_mod(a, p - 2, p);
}

// Residue class representative in [1, (p-1)/2]; 0 maps to 0.
inline std::uint64_t half_rep(std::uint64_t r, std::uint64_t p) {
  r %= p;
  return r <= p / 2 ? r : p - r;
}

}  // namespace cyclemix
