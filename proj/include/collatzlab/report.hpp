#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace collatzlab {

enum class OutputFormat { text, csv, structured };

/// Outcome of one property inside a verification suite.
struct Check {
  Check() = default;
  explicit Check(std::string name) : property(std::move(name)) {}

  std::string property;
  bool passed = true;
  std::uint64_t cases = 0;
  std::string counterexample;  // first violation, empty on success
};

struct Report {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }

  /// One line per check: "PASS <property> (<cases> cases)" or
  /// "FAIL <property>: <counterexample>".
  std::string render_text() const;
  std::string render_json() const;
  std::string render_csv() const;
};

}  // namespace collatzlab
