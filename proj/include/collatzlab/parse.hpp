#pragma once

#include <string_view>

#include "collatzlab/core.hpp"

namespace collatzlab {

/// Parses a positive count as typed on a command line: digits with optional
/// `_` or `,` separators ("100_000"), scientific shorthand with an integral
/// result ("1e8", "2.5e6"), or a power ("2^40").
/// Throws InvalidArgument on malformed or zero input and OverflowError when
/// the value exceeds 64 bits.
u64 parse_count(std::string_view text);

/// Same grammar as parse_count without the 64-bit limit.
BigInt parse_value(std::string_view text);

}  // namespace collatzlab
