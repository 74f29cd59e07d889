// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Expected values come from two places: the printed tables (embedded
// verbatim below) and the brute-force oracle in oracles.hpp.

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "collatzlab/analysis.hpp"
#include "collatzlab/fsm.hpp"
#include "oracles.hpp"

using namespace collatzlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// These fail against the printed data itself (see the detail lines); they
// are still reported as FAIL but do not turn the exit status red.
// 5: the printed S(e) listing skips 672.
// 9: for x = 2^k the product x*2^i is its own stopping power.
// 12: the printed factorization of 5460 multiplies out to 21840.
const std::vector<int> kKnownUnattainable{5, 9, 12};

int failures = 0;
int unexpected = 0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("%s %2d  %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  if (ok) return;
  ++failures;
  if (std::find(kKnownUnattainable.begin(), kKnownUnattainable.end(), id) == kKnownUnattainable.end())
    ++unexpected;
}

void note_line(const std::string& text) { std::printf("         %s\n", text.c_str()); }

// ---- printed frequency table --------------------------------------------

struct PrintedRow {
  u64 n;
  std::array<const char*, 6> freq;
};

const std::vector<PrintedRow> kPrinted{
    {10, {"0.700000", "0.1000", "0.1000", "0.1000", "0.00000", "0.0000"}},
    {100, {"0.890000", "0.0100", "0.0300", "0.0200", "0.04000", "0.0100"}},
    {1000, {"0.959000", "0.0020", "0.0290", "0.0020", "0.00700", "0.0010"}},
    {10000, {"0.973900", "0.0002", "0.0240", "0.0003", "0.00140", "0.0002"}},
    {100000, {"0.974780", "3.00E-05", "0.0249", "3.00E-05", "0.00023", "3.00E-05"}},
    {1000000, {"0.976082", "3.00E-06", "0.023875", "4.00E-06", "3.30E-05", "3.00E-06"}},
    {10000000, {"0.976114", "4.00E-07", "0.023881", "4.00E-07", "4.40E-06", "4.00E-07"}},
    {100000000, {"0.976161", "5.00E-08", "0.023838", "5.00E-08", "6.00E-07", "4.00E-08"}},
};

const PrintedRow& printed(u64 n) {
  for (const auto& r : kPrinted)
    if (r.n == n) return r;
  throw std::logic_error("no printed row");
}

// One unit in the last printed significant digit: "0.0249" -> 1e-4,
// "3.00E-05" -> 1e-7.
double last_digit_unit(const std::string& s) {
  const auto e = s.find_first_of("eE");
  const std::string mantissa = s.substr(0, e);
  const auto dot = mantissa.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
  const int exponent = e == std::string::npos ? 0 : std::stoi(s.substr(e + 1));
  return std::pow(10.0, exponent - decimals);
}

// Empty when every form is within tolerance; otherwise the offending forms.
std::string frequency_mismatches(const FrequencyTable& row) {
  const auto& p = printed(row.last);
  std::string bad;
  for (Form f : kForms) {
    const std::string text = p.freq[index_of(f)];
    const double expected = std::stod(text);
    const double unit = last_digit_unit(text);
    const double got = row.frequency(f);
    if (std::abs(got - expected) > unit * (1 + 1e-9))
      bad += fmt::format(" {}: {:.10g} vs printed {} (unit {:g})", label(f), got, text, unit);
  }
  return bad;
}

std::string counts_text(const FormCounts& c) { return fmt::format("({})", fmt::join(c, ",")); }

std::string frequencies_text(const FrequencyTable& row) {
  std::vector<std::string> parts;
  for (Form f : kForms) parts.push_back(format_frequency(row.count(f), row.n_total()));
  return fmt::format("{}", fmt::join(parts, " "));
}

const FrequencyTable* row_at(const SweepResult& r, u64 n) {
  for (const auto& row : r.rows)
    if (row.last == n) return &row;
  return nullptr;
}

// ---- oracle pass to 10^7 --------------------------------------------------

struct OraclePass {
  std::map<u64, FormCounts> rows;
  u64 impure = 0;  // non-powers of two landing in b, d or f
  u64 first_impure = 0;
  double seconds = 0;
};

OraclePass run_oracle(u64 n) {
  OraclePass out;
  const auto t0 = Clock::now();
  FormCounts c{};
  u64 next = 1000;
  for (u64 v = 1; v <= n; ++v) {
    const char f = oracle::raw_subsequence(v).form;
    ++c[static_cast<std::size_t>(f - 'a')];
    if ((f == 'b' || f == 'd' || f == 'f') && !oracle::pow2(v)) {
      if (out.impure++ == 0) out.first_impure = v;
    }
    if (v == next) {
      out.rows[v] = c;
      next *= 10;
    }
  }
  out.seconds = seconds_since(t0);
  return out;
}

// ---- printed factorization rows -------------------------------------------

struct PrintedFactorRow {
  u64 element;
  const char* text;
};

const std::vector<PrintedFactorRow> kFactorRows{
    // S(d)
    {1, "2^0"}, {64, "2^6"}, {4096, "2^{12}"}, {262144, "2^{18}"},
    // S(b)
    {4, "2^2"}, {256, "2^8"}, {16384, "2^{14}"},
    // S(f)
    {16, "2^4"}, {1024, "2^{10}"}, {65536, "2^{16}"},
    // S(e)
    {21, "3×7"},
    {32, "2^5"},
    {42, "2 \\times 3 \\times 7"},
    {84, "2^2 \\times 3 \\times 7"},
    {168, "2^3 \\times 3 \\times 7"},
    {336, "2^4 \\times 3 \\times 7"},
    {1344, "2^6 \\times 3 \\times 7"},
    {1365, "3 \\times 5 \\times 7 \\times 13"},
    {2048, "2^{11}"},
    {2688, "2^7 \\times 3 \\times 7"},
    {2730, "2 \\times 3 \\times 5 \\times 7 \\times 13"},
    {5376, "2^8 \\times 3 \\times 7"},
    {5460, "2^4 \\times 3 \\times 5 \\times 7 \\times 13"},
    {10752, "2^9 \\times 3 \\times 7"},
    {10920, "2^3 \\times 3 \\times 5 \\times 7 \\times 13"},
    {21504, "2^{10} \\times 3 \\times 7"},
    {21840, "2^4 \\times 3 \\times 5 \\times 7 \\times 13"},
    {43008, "2^{11} \\times 3 \\times 7"},
    {43680, "2^5 \\times 3 \\times 5 \\times 7 \\times 13"},
    {86016, "2^{12} \\times 3 \\times 7"},
    {87360, "2^6 \\times 3 \\times 5 \\times 7 \\times 13"},
    {87381, "3^2 \\times 7 \\times 19 \\times 73"},
    {131072, "2^{17}"},
    {172032, "2^{13} \\times 3 \\times 7"},
    {174720, "2^7 \\times 3 \\times 5 \\times 7 \\times 13"},
    {174762, "2 \\times 3^2 \\times 7 \\times 19 \\times 73"},
    {344064, "2^{14} \\times 3 \\times 7"},
    {349440, "2^8 \\times 3 \\times 5 \\times 7 \\times 13"},
    {349524, "2^2 \\times 3^2 \\times 7 \\times 19 \\times 73"},
    {688128, "2^{15} \\times 3 \\times 7"},
    {698880, "2^9 \\times 3 \\times 5 \\times 7 \\times 13"},
    {699048, "2^3 \\times 3^2 \\times 7 \\times 19 \\times 73"},
    // S(c)
    {2, "2"},
    {75, "3×5^2"},
    {85, "5×17"},
    {113, "113"},
    {128, "2^7"},
    {150, "2 \\times 3 \\times 5^2"},
    {170, "2 \\times 5 \\times 17"},
    {226, "2×113"},
    {267, "3×89"},
    {300, "2^2 \\times 3 \\times 5^2"},
    {301, "7×43"},
    {340, "2^2 \\times 5 \\times 17"},
    {401, "401"},
    {452, "2^2 \\times 113"},
    {453, "3×151"},
    {475, "5^2 \\times 19"},
    // S(a)
    {3, "3^1"},
    {5, "5^1"},
    {6, "2^1 \\times 3^1"},
    {7, "7^1"},
    {8, "2^3"},
    {9, "3^2"},
    {10, "2^1 \\times 5^1"},
    {11, "11^1"},
    {12, "3^1 \\times 2^2"},
    {13, "13^1"},
    {14, "2^1 \\times 7^1"},
    {15, "3^1 \\times 5^1"},
    {17, "17^1"},
    {18, "2^1 \\times 3^2"},
    {19, "19^1"},
    {20, "2^2 \\times 5^1"},
};

// Prime -> exponent, zero exponents dropped (2^0 is the empty product).
std::map<u64, unsigned> parse_printed_factors(std::string s) {
  for (const std::string sep : {"\\times", "×"}) {
    for (auto at = s.find(sep); at != std::string::npos; at = s.find(sep)) s.replace(at, sep.size(), "*");
  }
  std::map<u64, unsigned> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (s[i] == ' ' || s[i] == '{' || s[i] == '}')) ++i;
  };
  while (i < s.size()) {
    skip();
    const std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    const u64 prime = std::stoull(s.substr(start, i - start));
    unsigned exp = 1;
    skip();
    if (i < s.size() && s[i] == '^') {
      ++i;
      skip();
      const std::size_t e0 = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      exp = static_cast<unsigned>(std::stoul(s.substr(e0, i - e0)));
      skip();
    }
    if (exp != 0) out[prime] += exp;
    if (i < s.size() && s[i] == '*') ++i;
  }
  return out;
}

std::string factors_text(const std::map<u64, unsigned>& f) {
  std::vector<std::string> parts;
  for (auto [p, e] : f) parts.push_back(e == 1 ? std::to_string(p) : fmt::format("{}^{}", p, e));
  return parts.empty() ? "1" : fmt::format("{}", fmt::join(parts, " × "));
}

// ---- printed set lists ----------------------------------------------------

const std::vector<u64> kPrintedSc{2,   75,  85,  113, 128, 150, 170, 226,
                                  267, 300, 301, 340, 401, 452, 453, 475};
const std::vector<u64> kPrintedSe{21,     32,     42,     84,     168,    336,    1344,   1365,
                                  2048,   2688,   2730,   5376,   5460,   10752,  10920,  21504,
                                  21840,  43008,  43680,  86016,  87360,  87381,  131072, 172032,
                                  174720, 174762, 344064, 349440, 349524, 688128, 698880, 699048};

std::vector<u64> upto(const std::vector<u64>& v, u64 bound) {
  std::vector<u64> out;
  for (u64 x : v)
    if (x <= bound) out.push_back(x);
  return out;
}

std::string list_text(const std::vector<u64>& v) { return fmt::format("{{{}}}", fmt::join(v, ", ")); }

}  // namespace

int main() {
  const auto total = Clock::now();
  std::printf("collatzlab acceptance\n");

  std::printf("oracle pass over [1, 10^7] ...\n");
  const auto oracle_pass = run_oracle(10'000'000);
  std::printf("oracle pass done in %.1f s\n\n", oracle_pass.seconds);

  // 1
  {
    const auto t0 = Clock::now();
    const auto r = sweep(10);
    const double ms = seconds_since(t0) * 1e3;
    const auto& row = r.rows.back();
    const bool ok = row.counts == FormCounts{7, 1, 1, 1, 0, 0} && ms < 1.0 &&
                    frequency_mismatches(row).empty();
    verdict(1, ok, fmt::format("N=10 counts {} in {:.3f} ms (limit 1 ms)", counts_text(row.counts), ms));
    note_line("frequencies " + frequencies_text(row));
  }

  // 2
  {
    const auto r = sweep(100);
    const auto& row = r.rows.back();
    const bool ok = row.counts == FormCounts{89, 1, 3, 2, 4, 1} && frequency_mismatches(row).empty();
    verdict(2, ok, fmt::format("N=100 counts {}", counts_text(row.counts)));
  }

  // 3
  {
    const std::vector<u64> th{1000, 10000, 100000};
    SweepOptions opts;
    opts.workers = 1;
    const auto t0 = Clock::now();
    const auto r = sweep(1'000'000, opts, th);
    const double secs = seconds_since(t0);
    bool ok = secs < 10.0;
    std::vector<std::string> notes;
    for (u64 n : {u64{1000}, u64{10000}, u64{100000}, u64{1000000}}) {
      const auto* row = row_at(r, n);
      if (!row) {
        ok = false;
        notes.push_back(fmt::format("N={}: row missing", n));
        continue;
      }
      const auto bad = frequency_mismatches(*row);
      const bool exact = row->counts == oracle_pass.rows.at(n);
      ok = ok && bad.empty() && exact;
      notes.push_back(fmt::format("N={}: counts {}{} freq {}{}", n, counts_text(row->counts),
                                  exact ? "" : " (oracle " + counts_text(oracle_pass.rows.at(n)) + ")",
                                  frequencies_text(*row), bad.empty() ? "" : " MISMATCH" + bad));
    }
    verdict(3, ok, fmt::format("rows 10^3..10^6 within one printed digit, counts exact, 10^6 single-threaded in {:.2f} s (limit 10 s)", secs));
    for (const auto& n : notes) note_line(n);
  }

  // 4 (10^7 required, 10^8 reported as well); the 10^8 sweep also feeds 5
  SweepResult wide;
  {
    SweepOptions opts;
    opts.workers = 4;
    const auto t0 = Clock::now();
    const auto r7 = sweep(10'000'000, opts);
    const double secs = seconds_since(t0);
    const auto& row7 = r7.rows.back();
    const auto bad7 = frequency_mismatches(row7);
    const bool exact7 = row7.counts == oracle_pass.rows.at(10'000'000);

    opts.capture = {0, kUnlimited, 1000, kUnlimited, kUnlimited, kUnlimited};
    const auto t1 = Clock::now();
    const std::vector<u64> th{1'000'000, 10'000'000};
    wide = sweep(100'000'000, opts, th);
    const double secs8 = seconds_since(t1);
    const auto& row8 = wide.rows.back();
    const auto bad8 = frequency_mismatches(row8);

    const bool ok = bad7.empty() && exact7 && secs < 60.0 && bad8.empty();
    verdict(4, ok, fmt::format("10^7 on 4 workers in {:.2f} s (limit 60 s); 10^8 in {:.2f} s", secs, secs8));
    note_line(fmt::format("N=10^7: exact counts {} sum {} freq {}{}", counts_text(row7.counts),
                       row7.n_total(), frequencies_text(row7), bad7.empty() ? "" : " MISMATCH" + bad7));
    if (!exact7) note_line("oracle counts " + counts_text(oracle_pass.rows.at(10'000'000)));
    note_line(fmt::format("N=10^8: exact counts {} freq {}{}", counts_text(row8.counts),
                       frequencies_text(row8), bad8.empty() ? "" : " MISMATCH" + bad8));
  }

  // 5
  {
    const auto& m = wide.members;
    const auto sc = upto(m[index_of(Form::c)], 475);
    const std::vector<u64> se(m[index_of(Form::e)].begin(),
                              m[index_of(Form::e)].begin() + std::min<std::size_t>(32, m[index_of(Form::e)].size()));
    const auto sd = upto(m[index_of(Form::d)], 1'000'000);
    const auto sb = upto(m[index_of(Form::b)], 10'000'000);
    const auto sf = upto(m[index_of(Form::f)], 100'000'000);
    const bool c_ok = sc == kPrintedSc;
    const bool e_ok = se == kPrintedSe;
    const bool d_ok = sd == std::vector<u64>{1, 64, 4096, 262144};
    const bool b_ok = sb == std::vector<u64>{4, 256, 16384, 1048576};
    const bool f_ok = sf == std::vector<u64>{16, 1024, 65536, 4194304};
    verdict(5, c_ok && e_ok && d_ok && b_ok && f_ok, "set listings S(c), S(e), S(d), S(b), S(f)");
    note_line(fmt::format("S(c) ∩ [1,475]: {} {}", c_ok ? "matches" : "DIFFERS", list_text(sc)));
    note_line(fmt::format("S(e) first 32: {} {}", e_ok ? "matches" : "DIFFERS", list_text(se)));
    if (!e_ok) {
      std::vector<u64> missing, extra;
      for (u64 x : se)
        if (std::find(kPrintedSe.begin(), kPrintedSe.end(), x) == kPrintedSe.end()) extra.push_back(x);
      for (u64 x : kPrintedSe)
        if (std::find(se.begin(), se.end(), x) == se.end()) missing.push_back(x);
      note_line(fmt::format("  computed but not printed: {}; printed but pushed past 32: {}", list_text(extra),
                         list_text(missing)));
      for (u64 x : extra)
        note_line(fmt::format("  {}: raw oracle form {}, {} compressed steps", x, oracle::raw_subsequence(x).form,
                           oracle::raw_subsequence(x).kept_steps));
    }
    note_line(fmt::format("S(d) ∩ [1,10^6]: {} {}", d_ok ? "matches" : "DIFFERS", list_text(sd)));
    note_line(fmt::format("S(b) ∩ [1,10^7]: {} {}", b_ok ? "matches" : "DIFFERS", list_text(sb)));
    note_line(fmt::format("S(f) ∩ [1,10^8]: {} {}", f_ok ? "matches" : "DIFFERS", list_text(sf)));
  }

  // 6
  {
    SweepOptions opts;
    opts.capture = {0, kUnlimited, 0, kUnlimited, 0, kUnlimited};
    const auto r = sweep(10'000'000, opts);
    u64 impure = 0, oracle_disagree = 0, checked = 0;
    for (Form f : {Form::b, Form::d, Form::f}) {
      for (u64 v : r.members[index_of(f)]) {
        ++checked;
        if (!oracle::pow2(v)) ++impure;
        if (oracle::raw_subsequence(v).form != label(f)) ++oracle_disagree;
      }
    }
    const bool ok = impure == 0 && oracle_disagree == 0 && oracle_pass.impure == 0;
    verdict(6, ok, fmt::format("forms b, d, f hold only powers of two up to 10^7 ({} members)", checked));
    note_line(fmt::format("library: {} non-powers; raw oracle over every start: {} non-powers; member/oracle disagreements: {}",
                       impure, oracle_pass.impure, oracle_disagree));
  }

  // 7
  {
    u64 violations = 0;
    unsigned first_bad = 0;
    BigInt p = 1;
    unsigned residue_mod9 = 1;  // 2^m mod 9 by repeated doubling
    const char cycle[6] = {'d', 'c', 'b', 'a', 'f', 'e'};
    for (unsigned m = 0; m <= 600; ++m) {
      const auto c = classify(p);
      const char expected = cycle[m % 6];
      if (label(c.terminating_form) != expected || oracle::form_letter(residue_mod9) != expected ||
          c.stopping_exponent != m || c.compressed_steps != 0) {
        if (violations++ == 0) first_bad = m;
      }
      p <<= 1;
      residue_mod9 = residue_mod9 * 2 % 9;
    }
    verdict(7, violations == 0,
            fmt::format("classify(2^m) follows d,c,b,a,f,e for m <= 600: {} violations{}", violations,
                        violations ? fmt::format(" (first m={})", first_bad) : ""));
  }

  // 8
  {
    u64 conj = 0, conj_cases = 0, traces = 0;
    for (u64 v = 1; v <= 1'000'000; ++v) {
      if (v % 3 == 0) continue;
      ++conj_cases;
      if (fsm_step(*state_of(v)) != state_of(compressed_step(v))) ++conj;
    }
    for (u64 v = 1; v <= 100'000; ++v)
      if (fsm_trace(v).terminating_form != classify(v).terminating_form) ++traces;
    verdict(8, conj == 0 && traces == 0,
            fmt::format("FSM conjugacy ({} starts): {} violations; trace vs classify (10^5 starts): {} violations",
                        conj_cases, conj, traces));
  }

  // 9
  {
    u64 cases = 0, violations = 0, power_violations = 0, other_violations = 0, other_cases = 0;
    std::string first;
    for (u64 x = 1; x <= 10'000; ++x) {
      const auto base = classify(x);
      const bool power = oracle::pow2(x);
      for (unsigned i = 0; i <= 20; ++i) {
        const auto c = classify(x << i);
        ++cases;
        if (!power) ++other_cases;
        if (c.terminating_form != base.terminating_form || c.stopping_exponent != base.stopping_exponent) {
          ++violations;
          ++(power ? power_violations : other_violations);
          if (first.empty())
            first = fmt::format("x={} i={}: form {} 2^{} vs form {} 2^{}", x, i, label(c.terminating_form),
                                c.stopping_exponent, label(base.terminating_form), base.stopping_exponent);
        }
      }
    }
    verdict(9, violations == 0,
            fmt::format("classify(x*2^i) keeps form and exponent, x <= 10^4, i <= 20: {} violations in {} cases",
                        violations, cases));
    if (violations) note_line("first: " + first);
    note_line(fmt::format("x a power of two: {} violations (x*2^i is itself the stopping power 2^(k+i))",
                       power_violations));
    note_line(fmt::format("x not a power of two: {} violations in {} cases", other_violations, other_cases));
  }

  // 10
  {
    u64 mismatches = 0;
    for (u64 v = 1; v <= 100'000; ++v) {
      const auto c = classify(v);
      const auto o = oracle::raw_subsequence(v);
      if (label(c.terminating_form) != o.form || c.stopping_exponent != o.exponent) ++mismatches;
    }
    FormCounts raw{};
    for (u64 v = 1; v <= 10; ++v) ++raw[static_cast<std::size_t>(oracle::raw_first_power(v) - 'a')];
    const bool differential = raw == FormCounts{1, 1, 1, 1, 0, 6} && raw != sweep(10).rows.back().counts;
    verdict(10, mismatches == 0 && differential,
            fmt::format("compressed vs raw-subsequence oracle up to 10^5: {} mismatches; raw first-power counts at N=10 {}",
                        mismatches, counts_text(raw)));
  }

  // 11
  {
    std::string reference;
    bool same = true;
    int runs = 0;
    for (unsigned w : {1u, 2u, 8u}) {
      for (bool memo : {true, false}) {
        SweepOptions opts;
        opts.workers = w;
        opts.memo = memo;
        const auto csv = render_csv(sweep(100'000, opts));
        if (reference.empty()) reference = csv;
        same = same && csv == reference;
        ++runs;
      }
    }
    verdict(11, same, fmt::format("sweep(10^5) CSV byte-identical across workers {{1,2,8}} x memo on/off ({} runs)", runs));
  }

  // 12
  {
    u64 bad = 0;
    std::vector<std::string> notes;
    for (const auto& row : kFactorRows) {
      const auto printed_factors = parse_printed_factors(row.text);
      std::map<u64, unsigned> computed;
      for (const auto& [p, e] : factorize(row.element).factors) computed[static_cast<u64>(p)] = e;
      if (computed != printed_factors) {
        ++bad;
        BigInt product = 1;
        for (auto [p, e] : printed_factors) product *= boost::multiprecision::pow(BigInt(p), e);
        notes.push_back(fmt::format("{}: printed {} (= {}), computed {}; trial division {}", row.element,
                                    factors_text(printed_factors), product.str(), factors_text(computed),
                                    factors_text([&] {
                                      std::map<u64, unsigned> td;
                                      for (auto [p, e] : oracle::trial_division(row.element)) td[p] = e;
                                      return td;
                                    }())));
      }
    }
    verdict(12, bad == 0, fmt::format("{} printed factorization rows: {} mismatches", kFactorRows.size(), bad));
    for (const auto& n : notes) note_line(n);
  }

  std::printf("\n%d of 12 criteria failed (%d outside {%s}); total %.1f s\n", failures, unexpected,
              fmt::format("{}", fmt::join(kKnownUnattainable, ",")).c_str(), seconds_since(total));
  return unexpected == 0 ? 0 : 1;
}
