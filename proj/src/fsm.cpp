#include "collatzlab/fsm.hpp"

#include <fmt/format.h>

namespace collatzlab {

Report verify_power2_cycle(unsigned max_m) {
  if (max_m < 6) throw InvalidArgument("cycle verification needs max_m >= 6");
  Report report{"cycle", {}};
  Check residues{"2^m mod 9 follows 1,2,4,8,7,5 (forms d,c,b,a,f,e)"};
  Check period{"form(2^(m+6)) == form(2^m)"};
  Check base{"classify(2^m) stops immediately with exponent m"};

  BigInt p = 1;
  std::vector<Form> seen;
  for (unsigned m = 0; m <= max_m; ++m, p <<= 1) {
    const Form expected = power_of_two_form(m);
    const auto form = form_of(p);
    ++residues.cases;
    if (residues.passed && form != expected) {
      residues.passed = false;
      residues.counterexample = fmt::format("m={} gives residue {}", m, detail::mod_small(p, 9));
    }
    if (m >= 6) {
      ++period.cases;
      if (period.passed && form != seen[m - 6]) {
        period.passed = false;
        period.counterexample = fmt::format("m={}", m);
      }
    }
    seen.push_back(form.value_or(Form::a));

    const auto c = classify(p);
    ++base.cases;
    if (base.passed && (c.compressed_steps != 0 || c.stopping_exponent != m ||
                        c.terminating_form != expected)) {
      base.passed = false;
      base.counterexample = fmt::format("m={} classified as {} after {} steps", m,
                                        label(c.terminating_form), c.compressed_steps);
    }
  }
  report.checks = {residues, period, base};
  return report;
}

Report verify_scaling(u64 x_max, unsigned i_max, u64 step_cap) {
  if (x_max < 1 || i_max < 1) throw InvalidArgument("scaling verification needs x_max, i_max >= 1");
  if (i_max > 60) throw InvalidArgument("i_max above 60 is not supported");
  Report report{"scaling", {}};
  Check lemma{"classify(x*2^i) matches classify(x) in form and exponent, x not a power of two"};
  Check powers{"x = 2^k: x*2^i is its own stopping power 2^(k+i)"};

  for (u64 x = 1; x <= x_max; ++x) {
    const auto base = classify(u128{x}, step_cap);
    const auto k = power_of_two_exponent(x);
    for (unsigned i = 1; i <= i_max; ++i) {
      const u128 scaled = u128{x} << i;
      const auto c = classify(scaled, step_cap);
      if (k) {
        ++powers.cases;
        if (powers.passed && (c.stopping_exponent != *k + i || c.compressed_steps != 0)) {
          powers.passed = false;
          powers.counterexample = fmt::format("x={} i={}", x, i);
        }
        continue;
      }
      ++lemma.cases;
      if (lemma.passed && (c.terminating_form != base.terminating_form ||
                           c.stopping_exponent != base.stopping_exponent)) {
        lemma.passed = false;
        lemma.counterexample =
            fmt::format("x={} i={}: {} 2^{} vs {} 2^{}", x, i, label(c.terminating_form),
                        c.stopping_exponent, label(base.terminating_form), base.stopping_exponent);
      }
    }
  }
  report.checks = {lemma, powers};
  return report;
}

Report verify_fsm(u64 conjugacy_max, u64 trace_max, u64 step_cap) {
  Report report{"fsm", {}};
  Check conj{"fsm_step(state_of(v)) == state_of(compressed_step(v)) for 3 does not divide v"};
  Check parity{"branch parity: value parity == index parity for a,b,c and opposite for d,e,f"};
  Check agree{"fsm_trace terminating form == classify terminating form"};

  for (u64 v = 1; v <= conjugacy_max; ++v) {
    const auto s = state_of(v);
    if (!s) continue;
    ++conj.cases;
    const auto next = fsm_step(*s);
    const auto direct = state_of(compressed_step(v));
    if (conj.passed && (!direct || next != *direct)) {
      conj.passed = false;
      conj.counterexample = fmt::format("v={}: ({}, {}) vs value {}", v, label(next.form),
                                        next.index, compressed_step(v));
    }
    const bool same = ((v ^ s->index) & 1) == 0;
    const bool expect_same = s->form == Form::a || s->form == Form::b || s->form == Form::c;
    ++parity.cases;
    if (parity.passed && same != expect_same) {
      parity.passed = false;
      parity.counterexample = fmt::format("v={}", v);
    }
  }
  for (u64 v = 1; v <= trace_max; ++v) {
    ++agree.cases;
    const Form via_fsm = fsm_trace(v, step_cap).terminating_form;
    const Form via_classify = classify(v, step_cap).terminating_form;
    if (agree.passed && via_fsm != via_classify) {
      agree.passed = false;
      agree.counterexample =
          fmt::format("v={}: fsm {} vs classify {}", v, label(via_fsm), label(via_classify));
    }
  }
  report.checks = {conj, parity, agree};
  return report;
}

}  // namespace collatzlab
