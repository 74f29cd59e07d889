#pragma once

// Collatz dynamics and residue arithmetic shared by every other module.
//
// All operations are templates over the three integer representations the
// library uses:
//   u64     plain machine words (set sizes, bounds, factor inputs)
//   u128    the hot path of range sweeps, overflow-checked
//   BigInt  arbitrary precision, used for single queries and 2^m checks
// Every arithmetic step either produces the exact result or throws
// OverflowError; nothing wraps.

#include <array>
#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "collatzlab/errors.hpp"

namespace collatzlab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
concept CollatzInt =
    std::same_as<T, u64> || std::same_as<T, u128> || std::same_as<T, BigInt>;

/// The six units mod 9. Every power of two, and every value reached by an
/// odd compressed step, lies in exactly one of them.
enum class Form : std::uint8_t { a, b, c, d, e, f };

inline constexpr std::array<Form, 6> kForms{Form::a, Form::b, Form::c,
                                            Form::d, Form::e, Form::f};

constexpr std::size_t index_of(Form form) noexcept {
  return static_cast<std::size_t>(form);
}

constexpr char label(Form form) noexcept {
  return static_cast<char>('a' + static_cast<int>(form));
}

constexpr unsigned residue(Form form) noexcept {
  constexpr std::array<unsigned, 6> kResidue{8, 4, 2, 1, 5, 7};
  return kResidue[index_of(form)];
}

constexpr std::optional<Form> form_from_label(char c) noexcept {
  if (c >= 'a' && c <= 'f') return static_cast<Form>(c - 'a');
  if (c >= 'A' && c <= 'F') return static_cast<Form>(c - 'A');
  return std::nullopt;
}

constexpr std::optional<Form> form_from_residue(unsigned r) noexcept {
  switch (r) {
    case 8: return Form::a;
    case 4: return Form::b;
    case 2: return Form::c;
    case 1: return Form::d;
    case 5: return Form::e;
    case 7: return Form::f;
    default: return std::nullopt;
  }
}

/// 2^m mod 9 cycles 1,2,4,8,7,5 with period 6.
constexpr Form power_of_two_form(u64 m) noexcept {
  constexpr std::array<Form, 6> kCycle{Form::d, Form::c, Form::b,
                                       Form::a, Form::f, Form::e};
  return kCycle[m % 6];
}

/// Inverse of power_of_two_form: the residue of m mod 6 for powers in `form`.
constexpr unsigned power_of_two_phase(Form form) noexcept {
  constexpr std::array<unsigned, 6> kPhase{3, 2, 1, 0, 5, 4};
  return kPhase[index_of(form)];
}

enum class Mod4Class : std::uint8_t { A, B, C, D };

constexpr char label(Mod4Class c) noexcept {
  return static_cast<char>('A' + static_cast<int>(c));
}

std::string to_string(u128 v);
std::string to_string(const BigInt& v);
inline std::string to_string(u64 v) { return std::to_string(v); }

namespace detail {

template <CollatzInt T>
constexpr T max_of() {
  if constexpr (std::same_as<T, BigInt>) {
    return T{};  // unused
  } else {
    return static_cast<T>(~T{0});
  }
}

template <CollatzInt T>
[[noreturn]] void throw_overflow(const char* op, const T& v) {
  throw OverflowError(std::string(op) + " overflows for " + to_string(v));
}

template <CollatzInt T>
void require_positive(const T& v) {
  if (v == 0) throw InvalidArgument("value must be >= 1");
}

template <CollatzInt T>
bool is_odd(const T& v) {
  if constexpr (std::same_as<T, BigInt>) {
    return boost::multiprecision::bit_test(v, 0);
  } else {
    return (v & 1) != 0;
  }
}

template <CollatzInt T>
unsigned mod_small(const T& v, unsigned m) {
  if constexpr (std::same_as<T, BigInt>) {
    return static_cast<unsigned>(v % m);
  } else {
    return static_cast<unsigned>(v % m);
  }
}

template <CollatzInt T>
T checked_add(const T& x, const T& y) {
  if constexpr (std::same_as<T, BigInt>) {
    return x + y;
  } else {
    T out;
    if (__builtin_add_overflow(x, y, &out)) throw_overflow("addition", x);
    return out;
  }
}

template <CollatzInt T>
T checked_mul(const T& x, unsigned k) {
  if constexpr (std::same_as<T, BigInt>) {
    return x * k;
  } else {
    T out;
    if (__builtin_mul_overflow(x, static_cast<T>(k), &out))
      throw_overflow("multiplication", x);
    return out;
  }
}

}  // namespace detail

/// One step of the raw map: 3v+1 for odd v, v/2 for even v.
template <CollatzInt T>
T collatz_step(const T& v) {
  detail::require_positive(v);
  if (detail::is_odd(v))
    return detail::checked_add(detail::checked_mul(v, 3), T{1});
  return v >> 1;
}

/// One step of the compressed map: (3v+1)/2 for odd v, v/2 for even v.
/// For odd v the result is v + v/2 + 1, which only overflows when the result
/// itself does not fit.
template <CollatzInt T>
T compressed_step(const T& v) {
  detail::require_positive(v);
  if (detail::is_odd(v))
    return detail::checked_add(v, detail::checked_add(T(v >> 1), T{1}));
  return v >> 1;
}

/// m when v == 2^m.
template <CollatzInt T>
std::optional<unsigned> power_of_two_exponent(const T& v) {
  detail::require_positive(v);
  if constexpr (std::same_as<T, BigInt>) {
    const auto low = boost::multiprecision::lsb(v);
    if (low != boost::multiprecision::msb(v)) return std::nullopt;
    return static_cast<unsigned>(low);
  } else if constexpr (std::same_as<T, u64>) {
    if (!std::has_single_bit(v)) return std::nullopt;
    return static_cast<unsigned>(std::countr_zero(v));
  } else {
    if ((v & (v - 1)) != 0) return std::nullopt;
    const auto lo = static_cast<u64>(v);
    if (lo != 0) return static_cast<unsigned>(std::countr_zero(lo));
    return 64u + static_cast<unsigned>(std::countr_zero(static_cast<u64>(v >> 64)));
  }
}

template <CollatzInt T>
bool is_power_of_two(const T& v) {
  if constexpr (std::same_as<T, BigInt>) {
    return v > 0 && boost::multiprecision::lsb(v) == boost::multiprecision::msb(v);
  } else {
    return v != 0 && (v & (v - 1)) == 0;
  }
}

/// The recurrent form 9n + r containing v; empty exactly when 3 divides v.
template <CollatzInt T>
std::optional<Form> form_of(const T& v) {
  detail::require_positive(v);
  return form_from_residue(detail::mod_small(v, 9));
}

template <CollatzInt T>
Mod4Class mod4_class(const T& v) {
  detail::require_positive(v);
  switch (detail::mod_small(v, 4)) {
    case 1: return Mod4Class::A;
    case 2: return Mod4Class::B;
    case 3: return Mod4Class::C;
    default: return Mod4Class::D;
  }
}

/// Short-sequence reduction of the mod-4 classes, with k = (v - offset) / 4:
///   A  4k+1 -> 3k+1   (O,E,E)
///   B  4k+2 -> 2k+1   (E)
///   C  4k+3 -> 9k+8   (O,E,O,E)
///   D  4k+4 -> 2k+2   (E)
/// v = 1 is the degenerate A case (k = 0) and maps to itself.
template <CollatzInt T>
T mod4_reduce(const T& v) {
  const Mod4Class cls = mod4_class(v);
  switch (cls) {
    case Mod4Class::A: {
      const T k = (v - 1) >> 2;
      return detail::checked_add(detail::checked_mul(k, 3), T{1});
    }
    case Mod4Class::B: {
      const T k = (v - 2) >> 2;
      return detail::checked_add(detail::checked_mul(k, 2), T{1});
    }
    case Mod4Class::C: {
      const T k = (v - 3) >> 2;
      return detail::checked_add(detail::checked_mul(k, 9), T{8});
    }
    case Mod4Class::D: {
      const T k = (v - 4) >> 2;
      return detail::checked_add(detail::checked_mul(k, 2), T{2});
    }
  }
  return v;
}

/// Raw steps that mod4_reduce stands for: 3 for A, 1 for B and D, 4 for C.
constexpr unsigned mod4_reduce_length(Mod4Class cls) noexcept {
  switch (cls) {
    case Mod4Class::A: return 3;
    case Mod4Class::C: return 4;
    default: return 1;
  }
}

}  // namespace collatzlab
