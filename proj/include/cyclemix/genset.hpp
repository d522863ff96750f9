// Symmetric lazy generating sets of Z/pZ, stored as the positive half.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclemix/util.hpp"

namespace cyclemix {

// A = {0} u {+-a : a in half}, |A| = 2k+1, with p prime and the half entries
// strictly increasing in [1, (p-1)/2]. That range encodes a_i != +-a_j and
// a_i != 0; any such set generates Z/pZ because p is prime.
struct GenSet {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> half;

  static GenSet create(std::uint64_t p, std::vector<std::uint64_t> half);

  // Parses "1,2,5" style half lists (used by the CLI).
  static GenSet parse(std::uint64_t p, const std::string& half_text);

  std::size_t k() const { return half.size(); }
  std::size_t set_size() const { return 2 * half.size() + 1; }

  // The dilated set c*A, reduced back to canonical half form.
  GenSet dilated(std::uint64_t c) const;
};

}  // namespace cyclemix
