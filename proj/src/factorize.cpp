#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <numeric>

#include <boost/multiprecision/miller_rabin.hpp>

#include "collatzlab/analysis.hpp"

namespace collatzlab {
namespace {

constexpr unsigned kTrialLimit = 1000;

const std::vector<unsigned>& small_primes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<unsigned> out;
    for (unsigned i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned j = i * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128{a} * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Brent's variant with batched gcds. Returns a nontrivial divisor of the odd
// composite n.
u64 pollard_brent(u64 n) {
  constexpr u64 kBatch = 128;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
    u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

BigInt pollard_brent(const BigInt& n) {
  constexpr unsigned kBatch = 128;
  auto absdiff = [](const BigInt& a, const BigInt& b) { return a > b ? BigInt(a - b) : BigInt(b - a); };
  for (unsigned c = 1;; ++c) {
    auto f = [&](const BigInt& x) { return BigInt((x * x + c) % n); };
    BigInt y = 2, x = 2, ys = 2, q = 1, g = 1;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        for (u64 i = 0; i < std::min<u64>(kBatch, r - k); ++i) {
          y = f(y);
          q = (q * absdiff(x, y)) % n;
        }
        g = boost::multiprecision::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = boost::multiprecision::gcd(absdiff(x, ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(u64 n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.emplace_back(n);
    return;
  }
  const u64 d = n % 2 == 0 ? 2 : pollard_brent(n);
  split(d, out);
  split(n / d, out);
}

void split(const BigInt& n, std::vector<BigInt>& out) {
  if (n <= std::numeric_limits<u64>::max()) {
    split(static_cast<u64>(n), out);
    return;
  }
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const BigInt d = pollard_brent(n);
  split(d, out);
  split(BigInt(n / d), out);
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a proven witness set for all n < 3.3e24.
  for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n <= std::numeric_limits<u64>::max()) return is_prime(static_cast<u64>(n));
  return boost::multiprecision::miller_rabin_test(n, 25);
}

BigInt Factorization::product() const {
  BigInt p = 1;
  for (const auto& [prime, mult] : factors) p *= boost::multiprecision::pow(prime, mult);
  return p;
}

std::string Factorization::to_string() const {
  if (factors.empty()) return "1";
  std::string out;
  for (const auto& [prime, mult] : factors) {
    if (!out.empty()) out += " × ";
    out += prime.str();
    if (mult > 1) out += "^" + std::to_string(mult);
  }
  return out;
}

Factorization factorize(const BigInt& v) {
  if (v < 1) throw InvalidArgument("factorize requires v >= 1");
  std::map<BigInt, unsigned> counts;
  BigInt n = v;
  for (unsigned p : small_primes()) {
    if (BigInt(p) * p > n) break;
    while (n % p == 0) {
      n /= p;
      ++counts[BigInt(p)];
    }
  }
  if (n > 1) {
    std::vector<BigInt> rest;
    split(n, rest);
    for (const auto& p : rest) ++counts[p];
  }
  Factorization out;
  out.value = v;
  out.factors.assign(counts.begin(), counts.end());
  return out;
}

}  // namespace collatzlab
