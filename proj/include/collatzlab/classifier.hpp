#pragma once

// Terminating-form classification.
//
// The terminating form of a start is the mod-9 form of the first power of two
// visited by its COMPRESSED trajectory (the start itself included). This is
// the convention that reproduces the published frequency tables; the raw
// first-power-of-two convention is kept below as a reference for
// differential testing only.

#include <algorithm>
#include <array>
#include <atomic>
#include <memory>
#include <span>
#include <vector>

#include "collatzlab/core.hpp"
#include "collatzlab/report.hpp"

namespace collatzlab {

inline constexpr u64 kDefaultStepCap = 100'000;

using FormCounts = std::array<u64, 6>;

template <CollatzInt T>
struct Classification {
  T start{};
  Form terminating_form = Form::d;
  unsigned stopping_exponent = 0;
  u64 compressed_steps = 0;
  T peak{};  // over the compressed trajectory
};

template <CollatzInt T>
struct Trace {
  std::vector<T> values;  // start ... 2^m, inclusive
  Classification<T> result;
};

namespace detail {

template <CollatzInt T, class Visit>
Classification<T> walk_compressed(const T& start, u64 step_cap, Visit&& visit) {
  require_positive(start);
  if (step_cap == 0) throw InvalidArgument("step cap must be >= 1");
  Classification<T> out;
  out.start = start;
  out.peak = start;
  T v = start;
  visit(v);
  while (true) {
    if (const auto m = power_of_two_exponent(v)) {
      out.stopping_exponent = *m;
      out.terminating_form = power_of_two_form(*m);
      return out;
    }
    if (out.compressed_steps == step_cap) throw StepCapExceeded(to_string(start), step_cap);
    v = compressed_step(v);
    ++out.compressed_steps;
    if (v > out.peak) out.peak = v;
    visit(v);
  }
}

}  // namespace detail

template <CollatzInt T>
Classification<T> classify(const T& start, u64 step_cap = kDefaultStepCap) {
  return detail::walk_compressed(start, step_cap, [](const T&) {});
}

template <CollatzInt T>
Trace<T> classify_trace(const T& start, u64 step_cap = kDefaultStepCap) {
  Trace<T> trace;
  trace.result = detail::walk_compressed(
      start, step_cap, [&](const T& v) { trace.values.push_back(v); });
  return trace;
}

/// One byte per value: 0 = unknown, 1 + form index otherwise. Entries only
/// ever move from unknown to a form, and every writer stores the same form
/// for a given value, so relaxed atomics are enough for concurrent sweeps.
class FormMemo {
public:
  /// Covers values in [0, entries).
  explicit FormMemo(u64 entries);

  /// Table covering [0, max_value] or as much of it as fits `budget_bytes`.
  static FormMemo with_budget(u64 max_value, u64 budget_bytes);

  u64 size() const noexcept { return size_; }

  std::optional<Form> lookup(u64 v) const noexcept {
    if (v >= size_) return std::nullopt;
    const auto cell = cells_[v].load(std::memory_order_relaxed);
    if (cell == 0) return std::nullopt;
    return static_cast<Form>(cell - 1);
  }

  void store(u64 v, Form form) noexcept {
    if (v < size_)
      cells_[v].store(static_cast<std::uint8_t>(index_of(form) + 1),
                      std::memory_order_relaxed);
  }

private:
  std::unique_ptr<std::atomic<std::uint8_t>[]> cells_;
  u64 size_ = 0;
};

inline constexpr u64 kDefaultMemoBudgetBytes = u64{256} << 20;

/// Hot path for range sweeps: terminating form of `start` using 128-bit
/// checked arithmetic, consulting `memo` (may be null) for any value already
/// classified. The step cap counts compressed steps taken before a power of
/// two or a memo hit.
Form terminating_form(u64 start, const FormMemo* memo, u64 step_cap = kDefaultStepCap);

struct RangeOptions {
  bool memo = true;
  u64 memo_budget_bytes = kDefaultMemoBudgetBytes;
  u64 step_cap = kDefaultStepCap;
};

/// Terminating form of every start in [lo, hi], in order. Memo on or off
/// gives identical output.
std::vector<Form> classify_range(u64 lo, u64 hi, const RangeOptions& options = {});

FormCounts count_forms(std::span<const Form> forms);

// Reference conventions, independent of the compressed iteration above.

/// Form of the first power of two in the raw trajectory after deleting every
/// element that immediately follows an odd element. Agrees with classify().
Form raw_subsequence_form(u64 start, u64 raw_step_cap = 2 * kDefaultStepCap);

/// Form of the first power of two in the raw trajectory, nothing deleted.
/// Does NOT agree with classify(); kept to document the difference.
Form raw_first_power_form(u64 start, u64 raw_step_cap = 2 * kDefaultStepCap);

/// Compressed classification equals the raw-subsequence oracle for every
/// start <= max; also records where the raw first-power convention differs.
Report verify_oracle(u64 max, u64 step_cap = kDefaultStepCap);

}  // namespace collatzlab
