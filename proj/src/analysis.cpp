#include "collatzlab/analysis.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "json.hpp"

namespace collatzlab {
namespace {

DifferenceView differences(std::vector<std::int64_t> terms) {
  DifferenceView view;
  view.terms = std::move(terms);
  for (std::size_t i = 1; i < view.terms.size(); ++i)
    view.first.push_back(view.terms[i] - view.terms[i - 1]);
  for (std::size_t i = 1; i < view.first.size(); ++i)
    view.second.push_back(view.first[i] - view.first[i - 1]);
  return view;
}

std::string set_name(Form form) { return fmt::format("S({})", label(form)); }

nlohmann::ordered_json view_json(const DifferenceView& v) {
  return {{"terms", v.terms}, {"first_differences", v.first}, {"second_differences", v.second}};
}

nlohmann::ordered_json factor_json(const FactorRow& row) {
  nlohmann::ordered_json factors = nlohmann::ordered_json::array();
  for (const auto& [p, m] : row.factorization.factors) factors.push_back({p.str(), m});
  return {{"element", row.element},
          {"factorization", row.factorization.to_string()},
          {"factors", factors}};
}

std::string factor_csv(std::span<const FactorRow> rows) {
  std::string out = "element,factorization\n";
  for (const auto& r : rows) out += fmt::format("{},{}\n", r.element, r.factorization.to_string());
  return out;
}

std::string factor_text(Form form, std::span<const FactorRow> rows) {
  std::size_t width = std::string_view("Set Element").size();
  for (const auto& r : rows) width = std::max(width, std::to_string(r.element).size());
  std::string out = fmt::format("Prime factorization of the elements of {}\n", set_name(form));
  out += fmt::format("{:<{}}  {}\n", "Set Element", width, "Prime Factorization");
  for (const auto& r : rows)
    out += fmt::format("{:<{}}  {}\n", r.element, width, r.factorization.to_string());
  return out;
}

std::string view_text(std::string_view name, const DifferenceView& v) {
  return fmt::format("  {:<9} {}\n  {:<9} {}\n  {:<9} {}\n", name, fmt::join(v.terms, " "),
                     "  diff1", fmt::join(v.first, " "), "  diff2", fmt::join(v.second, " "));
}

}  // namespace

std::vector<u64> build_set(Form form, u64 bound, const SweepOptions& options) {
  SweepOptions opts = options;
  opts.capture.fill(0);
  opts.capture[index_of(form)] = kUnlimited;
  opts.checkpoint_path.reset();
  opts.halt_after.reset();
  auto result = sweep(bound, opts);
  return std::move(result.members[index_of(form)]);
}

std::vector<FactorRow> factor_rows(std::span<const u64> members) {
  std::vector<FactorRow> rows;
  rows.reserve(members.size());
  for (u64 v : members) rows.push_back({v, factorize(v)});
  return rows;
}

std::vector<FactorRow> factor_report(Form form, u64 bound, const SweepOptions& options) {
  const auto members = build_set(form, bound, options);
  return factor_rows(members);
}

ExponentScan power2_exponent_scan(Form form, std::span<const u64> members) {
  ExponentScan scan;
  scan.form = form;
  scan.expected_phase = power_of_two_phase(form);
  for (u64 v : members) {
    if (const auto m = power_of_two_exponent(v)) {
      scan.exponents.push_back(*m);
      if (*m % 6 != scan.expected_phase) scan.phases_match = false;
    } else {
      ++scan.non_power_members;
    }
  }
  return scan;
}

ExponentScan power2_exponent_scan(Form form, u64 bound, const SweepOptions& options) {
  const auto members = build_set(form, bound, options);
  return power2_exponent_scan(form, members);
}

GapReport gap_progression_report(Form form, std::span<const u64> members) {
  GapReport report;
  report.form = form;
  std::vector<std::int64_t> positions, values, exponents;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto m = power_of_two_exponent(members[i]);
    if (!m) continue;
    report.powers.push_back(members[i]);
    positions.push_back(static_cast<std::int64_t>(i + 1));
    if (members[i] > static_cast<u64>(std::numeric_limits<std::int64_t>::max()))
      throw OverflowError("power of two too large for the value view");
    values.push_back(static_cast<std::int64_t>(members[i]));
    exponents.push_back(*m);
  }
  if (report.powers.size() < 3)
    throw InvalidArgument(fmt::format("{} has {} power(s) of two in range; at least 3 are needed",
                                      set_name(form), report.powers.size()));
  report.positions = differences(std::move(positions));
  report.values = differences(std::move(values));
  report.exponents = differences(std::move(exponents));
  return report;
}

GapReport gap_progression_report(Form form, u64 bound, const SweepOptions& options) {
  const auto members = build_set(form, bound, options);
  return gap_progression_report(form, members);
}

SetReport set_report(Form form, u64 bound, bool with_factors, bool with_gaps,
                     const SweepOptions& options) {
  SetReport report;
  report.form = form;
  report.bound = bound;
  report.members = build_set(form, bound, options);
  if (with_factors) report.factors = factor_rows(report.members);
  report.scan = power2_exponent_scan(form, report.members);
  if (with_gaps) report.gaps = gap_progression_report(form, report.members);
  return report;
}

std::string render_factor_table(Form form, std::span<const FactorRow> rows, OutputFormat format) {
  switch (format) {
    case OutputFormat::csv:
      return factor_csv(rows);
    case OutputFormat::structured: {
      nlohmann::ordered_json j;
      j["form"] = std::string(1, label(form));
      j["rows"] = nlohmann::ordered_json::array();
      for (const auto& r : rows) j["rows"].push_back(factor_json(r));
      return j.dump(2) + "\n";
    }
    case OutputFormat::text:
      break;
  }
  return factor_text(form, rows);
}

std::string render_set_report(const SetReport& report, OutputFormat format) {
  const auto& scan = report.scan;
  if (format == OutputFormat::csv) {
    // Factor rows when requested, otherwise one member per line.
    if (!report.factors.empty()) return factor_csv(report.factors);
    std::string out = "element\n";
    for (u64 v : report.members) out += fmt::format("{}\n", v);
    return out;
  }
  if (format == OutputFormat::structured) {
    nlohmann::ordered_json j;
    j["form"] = std::string(1, label(report.form));
    j["residue"] = residue(report.form);
    j["bound"] = report.bound;
    j["count"] = report.members.size();
    j["members"] = report.members;
    j["power_of_two_exponents"] = scan.exponents;
    j["expected_exponent_mod_6"] = scan.expected_phase;
    j["exponent_phases_match"] = scan.phases_match;
    j["non_power_members"] = scan.non_power_members;
    if (!report.factors.empty()) {
      j["factorizations"] = nlohmann::ordered_json::array();
      for (const auto& r : report.factors) j["factorizations"].push_back(factor_json(r));
    }
    if (report.gaps) {
      j["gaps"] = {{"powers", report.gaps->powers},
                   {"positions", view_json(report.gaps->positions)},
                   {"values", view_json(report.gaps->values)},
                   {"exponents", view_json(report.gaps->exponents)}};
    }
    return j.dump(2) + "\n";
  }

  std::string out = fmt::format("{} (9n+{}) within [1, {}]: {} member(s)\n", set_name(report.form),
                                residue(report.form), report.bound, report.members.size());
  if (report.factors.empty()) {
    out += fmt::format("{{{}}}\n", fmt::join(report.members, ", "));
  } else {
    out += factor_text(report.form, report.factors);
  }
  out += fmt::format("powers of two: exponents {{{}}}, expected exponent mod 6 = {} ({})\n",
                     fmt::join(scan.exponents, ", "), scan.expected_phase,
                     scan.phases_match ? "all match" : "MISMATCH");
  out += fmt::format("non-power-of-two members: {}\n", scan.non_power_members);
  if (report.gaps) {
    out += fmt::format("power-of-two gaps within sorted {}:\n", set_name(report.form));
    out += view_text("position", report.gaps->positions);
    out += view_text("value", report.gaps->values);
    out += view_text("exponent", report.gaps->exponents);
  }
  return out;
}

}  // namespace collatzlab
