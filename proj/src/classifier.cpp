#include "collatzlab/classifier.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace collatzlab {
namespace {

// Largest odd v whose compressed successor v + v/2 + 1 fits in 128 bits.
constexpr u128 kCompressedLimit = (~u128{0} / 3) * 2;

// Largest v for which 3v+1 fits in 128 bits.
constexpr u128 kRawLimit = (~u128{0} - 1) / 3;

unsigned exponent_of(u128 v) {
  const auto lo = static_cast<u64>(v);
  if (lo != 0) return static_cast<unsigned>(std::countr_zero(lo));
  return 64u + static_cast<unsigned>(std::countr_zero(static_cast<u64>(v >> 64)));
}

bool single_bit(u128 v) { return (v & (v - 1)) == 0; }

Form raw_walk(u64 start, u64 raw_step_cap, bool delete_after_odd) {
  if (start == 0) throw InvalidArgument("value must be >= 1");
  u128 x = start;
  bool deleted = false;
  for (u64 steps = 0;; ++steps) {
    if (!deleted && single_bit(x)) return power_of_two_form(exponent_of(x));
    if (steps == raw_step_cap) throw StepCapExceeded(std::to_string(start), raw_step_cap);
    const bool odd = (x & 1) != 0;
    if (odd) {
      if (x > kRawLimit) throw OverflowError("raw step overflows 128 bits from start " + std::to_string(start));
      x = 3 * x + 1;
    } else {
      x >>= 1;
    }
    deleted = delete_after_odd && odd;
  }
}

}  // namespace

FormMemo::FormMemo(u64 entries)
    : cells_(std::make_unique<std::atomic<std::uint8_t>[]>(entries)), size_(entries) {
  for (u64 i = 0; i < entries; ++i) cells_[i].store(0, std::memory_order_relaxed);
}

FormMemo FormMemo::with_budget(u64 max_value, u64 budget_bytes) {
  const u64 wanted = max_value == std::numeric_limits<u64>::max() ? max_value : max_value + 1;
  return FormMemo(std::min(wanted, budget_bytes));
}

Form terminating_form(u64 start, const FormMemo* memo, u64 step_cap) {
  if (start == 0) throw InvalidArgument("value must be >= 1");
  if (step_cap == 0) throw InvalidArgument("step cap must be >= 1");
  const u64 memo_size = memo != nullptr ? memo->size() : 0;
  u128 v = start;
  u64 steps = 0;
  while (true) {
    if (single_bit(v)) return power_of_two_form(exponent_of(v));
    if (v < memo_size && steps != 0) {
      if (const auto hit = memo->lookup(static_cast<u64>(v))) return *hit;
    }
    if (steps == step_cap) throw StepCapExceeded(std::to_string(start), step_cap);
    if ((v & 1) != 0) {
      if (v > kCompressedLimit)
        throw OverflowError("compressed step overflows 128 bits from start " + std::to_string(start));
      v += (v >> 1) + 1;
    } else {
      v >>= 1;
    }
    ++steps;
  }
}

std::vector<Form> classify_range(u64 lo, u64 hi, const RangeOptions& options) {
  if (lo == 0 || lo > hi) throw InvalidArgument("range requires 1 <= lo <= hi");
  std::vector<Form> out;
  out.reserve(hi - lo + 1);
  if (!options.memo) {
    for (u64 v = lo;; ++v) {
      out.push_back(terminating_form(v, nullptr, options.step_cap));
      if (v == hi) break;
    }
    return out;
  }
  FormMemo memo = FormMemo::with_budget(hi, options.memo_budget_bytes);
  for (u64 v = lo;; ++v) {
    const Form f = terminating_form(v, &memo, options.step_cap);
    memo.store(v, f);
    out.push_back(f);
    if (v == hi) break;
  }
  return out;
}

FormCounts count_forms(std::span<const Form> forms) {
  FormCounts counts{};
  for (Form f : forms) ++counts[index_of(f)];
  return counts;
}

Form raw_subsequence_form(u64 start, u64 raw_step_cap) {
  return raw_walk(start, raw_step_cap, true);
}

Form raw_first_power_form(u64 start, u64 raw_step_cap) {
  return raw_walk(start, raw_step_cap, false);
}

Report verify_oracle(u64 max, u64 step_cap) {
  Report report{"oracle", {}};
  Check agree{"compressed classification == raw trajectory with post-odd elements deleted"};
  Check differs{"raw first-power convention differs from compressed at N=10 as (1,1,1,1,0,6)"};
  for (u64 v = 1; v <= max; ++v) {
    ++agree.cases;
    const Form compressed = terminating_form(v, nullptr, step_cap);
    const Form raw = raw_subsequence_form(v, 2 * step_cap);
    if (agree.passed && compressed != raw) {
      agree.passed = false;
      agree.counterexample =
          fmt::format("v={}: compressed {} vs raw {}", v, label(compressed), label(raw));
    }
  }
  FormCounts raw_counts{};
  for (u64 v = 1; v <= 10; ++v) ++raw_counts[index_of(raw_first_power_form(v))];
  differs.cases = 10;
  if (raw_counts != FormCounts{1, 1, 1, 1, 0, 6}) {
    differs.passed = false;
    differs.counterexample = fmt::format("raw first-power counts {}", fmt::join(raw_counts, ","));
  }
  report.checks = {agree, differs};
  return report;
}

}  // namespace collatzlab
