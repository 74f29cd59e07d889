#include "collatzlab/core.hpp"

#include <algorithm>

namespace collatzlab {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace collatzlab
