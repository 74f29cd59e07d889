#pragma once

// Brute-force reference implementations used only by tests. They share no
// code with the library: plain loops over unsigned __int128, raw Collatz
// steps, trial division.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline bool pow2(u128 v) { return v != 0 && (v & (v - 1)) == 0; }

inline unsigned log2_exact(u128 v) {
  unsigned m = 0;
  while (v > 1) {
    v >>= 1;
    ++m;
  }
  return m;
}

/// 'a'..'f' for residues 8,4,2,1,5,7 mod 9; '?' otherwise.
inline char form_letter(u128 v) {
  switch (static_cast<unsigned>(v % 9)) {
    case 8: return 'a';
    case 4: return 'b';
    case 2: return 'c';
    case 1: return 'd';
    case 5: return 'e';
    case 7: return 'f';
    default: return '?';
  }
}

struct Outcome {
  char form = '?';
  unsigned exponent = 0;
  u64 kept_steps = 0;  // length of the kept subsequence minus one
};

/// Raw 3n+1 / n/2 iteration; the element right after each odd element is
/// dropped, and the first power of two among the kept elements decides.
inline Outcome raw_subsequence(u64 start) {
  u128 x = start;
  bool drop = false;
  Outcome out;
  u64 kept = 0;
  while (true) {
    if (!drop) {
      if (pow2(x)) {
        out.form = form_letter(x);
        out.exponent = log2_exact(x);
        out.kept_steps = kept;
        return out;
      }
      ++kept;
    }
    const bool odd = (x % 2) == 1;
    x = odd ? 3 * x + 1 : x / 2;
    drop = odd;
  }
}

/// First power of two in the raw trajectory, nothing dropped.
inline char raw_first_power(u64 start) {
  u128 x = start;
  while (!pow2(x)) x = (x % 2 == 1) ? 3 * x + 1 : x / 2;
  return form_letter(x);
}

/// Per-form counts over [1, n] in a..f order, no memoization.
inline std::array<u64, 6> counts_upto(u64 n) {
  std::array<u64, 6> c{};
  for (u64 v = 1; v <= n; ++v) ++c[raw_subsequence(v).form - 'a'];
  return c;
}

inline std::vector<std::pair<u64, unsigned>> trial_division(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k != 0) out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace oracle
