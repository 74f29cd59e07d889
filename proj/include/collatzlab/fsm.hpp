#pragma once

// Six-state machine over the units mod 9. A state (form, n) stands for the
// integer 9n + residue(form); one transition is one compressed Collatz step.
//
// Transition table, with n the state index:
//   a: n even -> (b, n/2)       n odd -> (a, (3n+1)/2)
//   b: n even -> (c, n/2)       n odd -> (c, (3n+1)/2)
//   c: n even -> (d, n/2)       n odd -> (a, (3n-1)/2)
//   d: n even -> (c, 3n/2)      n odd -> (e, (n-1)/2)
//   e: n even -> (a, 3n/2)      n odd -> (f, (n-1)/2)
//   f: n even -> (c, (3n+2)/2)  n odd -> (a, (n-1)/2)
// Value parity equals index parity for a, b, c and is opposite for d, e, f,
// so "n even" is the halving branch for a, b, c and the odd step for d, e, f.

#include <optional>
#include <vector>

#include "collatzlab/classifier.hpp"
#include "collatzlab/report.hpp"

namespace collatzlab {

template <CollatzInt T>
struct FsmState {
  Form form = Form::d;
  T index{};

  T value() const {
    return detail::checked_add(detail::checked_mul(index, 9), T{residue(form)});
  }

  friend bool operator==(const FsmState&, const FsmState&) = default;
};

template <CollatzInt T>
std::optional<FsmState<T>> state_of(const T& v) {
  const auto form = form_of(v);
  if (!form) return std::nullopt;
  return FsmState<T>{*form, T((v - residue(*form)) / 9)};
}

/// One transition. The caller stops at powers of two; stepping past one is
/// still well defined (it continues the compressed trajectory).
template <CollatzInt T>
FsmState<T> fsm_step(const FsmState<T>& s) {
  using detail::checked_add;
  using detail::checked_mul;
  const T& n = s.index;
  const bool even = !detail::is_odd(n);
  switch (s.form) {
    case Form::a:
      if (even) return {Form::b, T(n >> 1)};
      return {Form::a, T(checked_add(checked_mul(n, 3), T{1}) >> 1)};
    case Form::b:
      if (even) return {Form::c, T(n >> 1)};
      return {Form::c, T(checked_add(checked_mul(n, 3), T{1}) >> 1)};
    case Form::c:
      if (even) return {Form::d, T(n >> 1)};
      return {Form::a, T((checked_mul(n, 3) - 1) >> 1)};
    case Form::d:
      if (even) return {Form::c, T(checked_mul(n, 3) >> 1)};
      return {Form::e, T((n - 1) >> 1)};
    case Form::e:
      if (even) return {Form::a, T(checked_mul(n, 3) >> 1)};
      return {Form::f, T((n - 1) >> 1)};
    case Form::f:
      if (even) return {Form::c, T(checked_add(checked_mul(n, 3), T{2}) >> 1)};
      return {Form::a, T((n - 1) >> 1)};
  }
  return s;
}

template <CollatzInt T>
struct FsmEntry {
  FsmState<T> state;
  u64 steps = 0;
};

/// Compressed steps until the value leaves the multiples of 3. An odd step
/// always does (3v+1 is 1 mod 3), so this takes at most v's 2-adic valuation
/// plus one steps.
template <CollatzInt T>
FsmEntry<T> fsm_enter(const T& v, u64 step_cap = kDefaultStepCap) {
  detail::require_positive(v);
  T x = v;
  u64 steps = 0;
  while (true) {
    if (auto s = state_of(x)) return {*s, steps};
    if (steps == step_cap) throw StepCapExceeded(to_string(v), step_cap);
    x = compressed_step(x);
    ++steps;
  }
}

template <CollatzInt T>
struct FsmTrace {
  u64 entry_steps = 0;
  std::vector<FsmState<T>> states;  // entry state ... power-of-two state
  Form terminating_form = Form::d;
};

/// The step cap covers entry and transitions together, matching classify().
template <CollatzInt T>
FsmTrace<T> fsm_trace(const T& v, u64 step_cap = kDefaultStepCap) {
  FsmTrace<T> trace;
  auto entry = fsm_enter(v, step_cap);
  trace.entry_steps = entry.steps;
  u64 steps = entry.steps;
  FsmState<T> s = entry.state;
  trace.states.push_back(s);
  while (!is_power_of_two(s.value())) {
    if (steps == step_cap) throw StepCapExceeded(to_string(v), step_cap);
    s = fsm_step(s);
    ++steps;
    trace.states.push_back(s);
  }
  trace.terminating_form = s.form;
  return trace;
}

/// 2^m mod 9 follows [1,2,4,8,7,5] for every m <= max_m, and classify(2^m)
/// reports that form with zero steps. Uses arbitrary precision.
Report verify_power2_cycle(unsigned max_m);

/// classify(x * 2^i) matches classify(x) in form and stopping exponent for
/// all x <= x_max, i <= i_max.
Report verify_scaling(u64 x_max, unsigned i_max, u64 step_cap = kDefaultStepCap);

/// Conjugacy of fsm_step with compressed_step for 3 ∤ v <= conjugacy_max,
/// and fsm_trace/classify agreement for v <= trace_max.
Report verify_fsm(u64 conjugacy_max, u64 trace_max, u64 step_cap = kDefaultStepCap);

}  // namespace collatzlab
