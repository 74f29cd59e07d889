#include "collatzlab/parse.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <string>

namespace collatzlab {
namespace {

std::string strip_separators(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '_' || c == ',') continue;
    out.push_back(c);
  }
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

[[noreturn]] void malformed(std::string_view text) {
  throw InvalidArgument("malformed number '" + std::string(text) + "'");
}

BigInt parse_digits(std::string_view s, std::string_view original) {
  if (!all_digits(s)) malformed(original);
  return BigInt(std::string(s));
}

unsigned parse_small(std::string_view s, std::string_view original) {
  if (!all_digits(s) || s.size() > 6) malformed(original);
  return static_cast<unsigned>(std::stoul(std::string(s)));
}

}  // namespace

BigInt parse_value(std::string_view text) {
  const std::string s = strip_separators(text);
  if (s.empty()) malformed(text);

  BigInt value;
  if (const auto caret = s.find('^'); caret != std::string::npos) {
    const BigInt base = parse_digits(std::string_view(s).substr(0, caret), text);
    const unsigned exp = parse_small(std::string_view(s).substr(caret + 1), text);
    value = boost::multiprecision::pow(base, exp);
  } else if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    std::string mantissa = s.substr(0, e);
    const unsigned exp = parse_small(std::string_view(s).substr(e + 1), text);
    unsigned fraction_digits = 0;
    if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
      fraction_digits = static_cast<unsigned>(mantissa.size() - dot - 1);
      mantissa.erase(dot, 1);
    }
    if (fraction_digits > exp) {
      // Only integral results are counts: trailing fraction digits must be 0.
      const auto cut = mantissa.size() - (fraction_digits - exp);
      if (mantissa.find_first_not_of('0', cut) != std::string::npos)
        malformed(text);
      mantissa.resize(cut);
      fraction_digits = exp;
    }
    value = parse_digits(mantissa, text) *
            boost::multiprecision::pow(BigInt(10), exp - fraction_digits);
  } else {
    value = parse_digits(s, text);
  }
  if (value == 0) throw InvalidArgument("value must be >= 1, got '" + std::string(text) + "'");
  return value;
}

u64 parse_count(std::string_view text) {
  const BigInt value = parse_value(text);
  if (value > std::numeric_limits<u64>::max())
    throw OverflowError("'" + std::string(text) + "' does not fit in 64 bits");
  return static_cast<u64>(value);
}

}  // namespace collatzlab
