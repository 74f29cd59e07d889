#include "collatzlab/report.hpp"

#include <fmt/format.h>
#include "json.hpp"

namespace collatzlab {

std::string Report::render_text() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed)
      out += fmt::format("PASS {} ({} cases)\n", c.property, c.cases);
    else
      out += fmt::format("FAIL {}: {}\n", c.property, c.counterexample);
  }
  out += fmt::format("{} {}\n", suite, passed() ? "PASS" : "FAIL");
  return out;
}

std::string Report::render_csv() const {
  std::string out = "suite,property,result,cases,counterexample\n";
  for (const auto& c : checks) {
    out += fmt::format("{},\"{}\",{},{},\"{}\"\n", suite, c.property,
                       c.passed ? "PASS" : "FAIL", c.cases, c.counterexample);
  }
  return out;
}

std::string Report::render_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["passed"] = passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"property", c.property},
                           {"passed", c.passed},
                           {"cases", c.cases},
                           {"counterexample", c.counterexample}});
  }
  return j.dump(2) + "\n";
}

}  // namespace collatzlab
