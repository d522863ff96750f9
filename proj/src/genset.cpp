#include "cyclemix/genset.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace cyclemix {

GenSet GenSet::create(std::uint64_t p, std::vector<std::uint64_t> half) {
  if (p < 3 || !is_prime(p)) throw ValidationError("GenSet: modulus must be a prime >= 3, got " + std::to_string(p));
  if (half.empty()) throw ValidationError("GenSet: half set must be nonempty (k >= 1)");
  if (half.size() > (p - 1) / 2)
    throw ValidationError("GenSet: k must satisfy 2k+1 <= p, got k = " + std::to_string(half.size()));
  std::sort(half.begin(), half.end());
  for (std::size_t i = 0; i < half.size(); ++i) {
    if (half[i] < 1 || half[i] > (p - 1) / 2)
      throw ValidationError("GenSet: half entries must lie in [1, (p-1)/2], got " + std::to_string(half[i]));
    if (i > 0 && half[i] == half[i - 1])
      throw ValidationError("GenSet: duplicate half entry " + std::to_string(half[i]));
  }
  GenSet a;
  a.p = p;
  a.half = std::move(half);
  return a;
}

GenSet GenSet::parse(std::uint64_t p, const std::string& half_text) {
  std::vector<std::uint64_t> vals;
  std::size_t pos = 0;
  while (pos < half_text.size()) {
    std::size_t next = half_text.find(',', pos);
    if (next == std::string::npos) next = half_text.size();
    const std::string tok = half_text.substr(pos, next - pos);
    std::uint64_t value = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw ValidationError("GenSet: cannot parse half entry '" + tok + "'");
    vals.push_back(value);
    pos = next + 1;
  }
  return create(p, std::move(vals));
}

GenSet GenSet::dilated(std::uint64_t c) const {
  c %= p;
  if (c == 0) throw ValidationError("GenSet: dilation factor must be nonzero mod p");
  std::set<std::uint64_t> reps;
  for (std::uint64_t a : half) reps.insert(half_rep(mul_mod(c, a, p), p));
  return create(p, std::vector<std::uint64_t>(reps.begin(), reps.end()));
}

}  // namespace cyclemix
