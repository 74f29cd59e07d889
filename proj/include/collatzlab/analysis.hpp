#pragma once

// Membership sets S(r) = { x <= bound : x terminates in form r }, their prime
// factorizations, and the power-of-two structure inside each set.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "collatzlab/report.hpp"
#include "collatzlab/sweep.hpp"

namespace collatzlab {

struct Factorization {
  BigInt value;
  std::vector<std::pair<BigInt, unsigned>> factors;  // ascending primes

  BigInt product() const;

  /// "3^2 × 7 × 19 × 73"; "1" for the empty factorization.
  std::string to_string() const;
};

/// Deterministic Miller-Rabin below 2^64, 25-round probabilistic above.
bool is_prime(const BigInt& n);
bool is_prime(u64 n);

/// Trial division by small primes, then Pollard-Brent rho on what remains.
Factorization factorize(const BigInt& v);
inline Factorization factorize(u64 v) { return factorize(BigInt(v)); }

/// Ascending members of S(form) within [1, bound].
std::vector<u64> build_set(Form form, u64 bound, const SweepOptions& options = {});

struct FactorRow {
  u64 element = 0;
  Factorization factorization;
};

std::vector<FactorRow> factor_report(Form form, u64 bound, const SweepOptions& options = {});
std::vector<FactorRow> factor_rows(std::span<const u64> members);

struct ExponentScan {
  Form form = Form::a;
  std::vector<unsigned> exponents;  // of the power-of-two members, ascending
  unsigned expected_phase = 0;      // exponent mod 6 predicted by the 2^m cycle
  bool phases_match = true;
  u64 non_power_members = 0;

  bool has_non_powers() const noexcept { return non_power_members != 0; }
};

ExponentScan power2_exponent_scan(Form form, std::span<const u64> members);
ExponentScan power2_exponent_scan(Form form, u64 bound, const SweepOptions& options = {});

/// A sequence with its first and second differences.
struct DifferenceView {
  std::vector<std::int64_t> terms;
  std::vector<std::int64_t> first;
  std::vector<std::int64_t> second;
};

/// Where the powers of two sit inside a sorted S(form). Descriptive only:
/// three views (1-based position, value, exponent), no constancy claim.
struct GapReport {
  Form form = Form::a;
  std::vector<u64> powers;
  DifferenceView positions;
  DifferenceView values;
  DifferenceView exponents;
};

/// Throws InvalidArgument when fewer than three powers of two are present.
GapReport gap_progression_report(Form form, std::span<const u64> members);
GapReport gap_progression_report(Form form, u64 bound, const SweepOptions& options = {});

struct SetReport {
  Form form = Form::a;
  u64 bound = 0;
  std::vector<u64> members;
  std::vector<FactorRow> factors;  // empty unless requested
  ExponentScan scan;
  std::optional<GapReport> gaps;
};

SetReport set_report(Form form, u64 bound, bool with_factors, bool with_gaps,
                     const SweepOptions& options = {});

std::string render_factor_table(Form form, std::span<const FactorRow> rows, OutputFormat format);
std::string render_set_report(const SetReport& report, OutputFormat format);

}  // namespace collatzlab
