// collatzlab command-line frontend. Talks to the library exclusively through
// the C API in collatzlab/collatzlab.h.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 runtime error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "collatzlab/collatzlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Failure {
  int exit_code;
  std::string message;
};

void check(clab_status status) {
  if (status == CLAB_OK) return;
  std::string message = clab_last_error();
  if (message.empty()) message = clab_status_name(status);
  for (char& c : message)
    if (c == '\n') c = ' ';
  throw Failure{status == CLAB_INVALID_ARGUMENT ? kExitUsage : kExitRuntime, message};
}

uint64_t count_arg(const std::string& text, const char* name) {
  uint64_t v = 0;
  if (clab_parse_count(text.c_str(), &v) != CLAB_OK)
    throw Failure{kExitUsage, std::string(name) + ": " + clab_last_error()};
  return v;
}

struct Owned {
  char* p = nullptr;
  ~Owned() { clab_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Config {
  std::string workers = "1";
  std::string chunk = "65536";
  bool no_memo = false;
  std::string memo_budget = "268435456";
  std::string step_cap = "100000";
  std::string format = "auto";
  std::string output;
  std::string checkpoint;
  std::string checkpoint_interval = "16777216";
  bool resume = false;
  std::string stop_at;
  bool no_timing = false;

  std::string value;  // classify / trace / fsm-trace
  std::string max;
  std::vector<std::string> rows;
  std::string powers = "1-6";
  std::string form;
  bool factor = false;
  bool gaps = false;
  std::string suite;
  std::string i_max;
};

clab_format resolve_format(const std::string& name, clab_format fallback) {
  if (name == "auto") return fallback;
  if (name == "text") return CLAB_FORMAT_TEXT;
  if (name == "csv") return CLAB_FORMAT_CSV;
  if (name == "structured" || name == "json") return CLAB_FORMAT_STRUCTURED;
  throw Failure{kExitUsage, "unknown format '" + name + "' (text, csv, structured)"};
}

clab_sweep_options sweep_options(const Config& cfg) {
  clab_sweep_options o;
  clab_sweep_options_init(&o);
  const uint64_t workers = count_arg(cfg.workers, "--workers");
  if (workers > 4096) throw Failure{kExitUsage, "--workers: at most 4096"};
  o.workers = static_cast<uint32_t>(workers);
  o.chunk = count_arg(cfg.chunk, "--chunk");
  o.memo = cfg.no_memo ? 0 : 1;
  o.memo_budget_bytes = count_arg(cfg.memo_budget, "--memo-budget");
  o.step_cap = count_arg(cfg.step_cap, "--step-cap");
  o.checkpoint_path = cfg.checkpoint.empty() ? nullptr : cfg.checkpoint.c_str();
  o.checkpoint_interval = count_arg(cfg.checkpoint_interval, "--checkpoint-interval");
  o.resume = cfg.resume ? 1 : 0;
  o.halt_after = cfg.stop_at.empty() ? 0 : count_arg(cfg.stop_at, "--stop-at");
  if (cfg.resume && cfg.checkpoint.empty())
    throw Failure{kExitUsage, "--resume requires --checkpoint"};
  return o;
}

std::vector<uint32_t> parse_powers(const std::string& text) {
  std::vector<uint32_t> out;
  auto number = [&](const std::string& s) -> uint32_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 2)
      throw Failure{kExitUsage, "--powers: malformed '" + text + "'"};
    return static_cast<uint32_t>(std::stoul(s));
  };
  if (const auto dash = text.find('-'); dash != std::string::npos) {
    const uint32_t lo = number(text.substr(0, dash));
    const uint32_t hi = number(text.substr(dash + 1));
    if (lo > hi) throw Failure{kExitUsage, "--powers: empty range '" + text + "'"};
    for (uint32_t p = lo; p <= hi; ++p) out.push_back(p);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(number(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitRuntime, "cannot open " + cfg.output + " for writing"};
  out << text;
  if (!out) throw Failure{kExitRuntime, "write failed for " + cfg.output};
}

int run_trajectory(const Config& cfg, const std::string& which) {
  const uint64_t cap = count_arg(cfg.step_cap, "--step-cap");
  clab_trajectory* t = nullptr;
  if (which == "classify") check(clab_classify(cfg.value.c_str(), cap, &t));
  else if (which == "trace") check(clab_trace(cfg.value.c_str(), cap, &t));
  else check(clab_fsm_trace(cfg.value.c_str(), cap, &t));
  Owned text;
  const clab_status st = clab_trajectory_render(t, resolve_format(cfg.format, CLAB_FORMAT_TEXT), &text.p);
  clab_trajectory_free(t);
  check(st);
  emit(cfg, text.str());
  return kExitOk;
}

int run_sweep_like(const Config& cfg, bool table3) {
  const auto options = sweep_options(cfg);
  clab_sweep* s = nullptr;
  if (table3) {
    const auto powers = parse_powers(cfg.powers);
    check(clab_table3(powers.data(), powers.size(), &options, &s));
  } else {
    if (cfg.max.empty()) throw Failure{kExitUsage, "sweep requires --max"};
    const uint64_t n = count_arg(cfg.max, "--max");
    std::vector<uint64_t> rows;
    for (const auto& r : cfg.rows) rows.push_back(count_arg(r, "--rows"));
    check(clab_sweep_run(n, rows.data(), rows.size(), &options, &s));
  }
  Owned text;
  const clab_status st = clab_sweep_render(s, resolve_format(cfg.format, CLAB_FORMAT_CSV), &text.p);
  const bool complete = clab_sweep_complete(s) != 0;
  const uint64_t next = clab_sweep_next_unprocessed(s);
  clab_sweep_free(s);
  check(st);
  emit(cfg, text.str());
  if (!complete)
    std::fprintf(stderr, "note: stopped before completion; next unprocessed start %llu\n",
                 static_cast<unsigned long long>(next));
  return kExitOk;
}

int run_sets(const Config& cfg) {
  if (cfg.form.size() != 1) throw Failure{kExitUsage, "--form expects one of a, b, c, d, e, f"};
  if (cfg.max.empty()) throw Failure{kExitUsage, "sets requires --max"};
  const auto options = sweep_options(cfg);
  Owned text;
  check(clab_set_report(cfg.form[0], count_arg(cfg.max, "--max"), cfg.factor ? 1 : 0,
                        cfg.gaps ? 1 : 0, &options, resolve_format(cfg.format, CLAB_FORMAT_TEXT),
                        &text.p));
  emit(cfg, text.str());
  return kExitOk;
}

int run_verify(const Config& cfg) {
  const auto options = sweep_options(cfg);
  const uint64_t max = cfg.max.empty() ? 0 : count_arg(cfg.max, "--max");
  const uint64_t aux = cfg.i_max.empty() ? 0 : count_arg(cfg.i_max, "--i-max");
  clab_report* r = nullptr;
  check(clab_verify(cfg.suite.c_str(), max, aux, &options, &r));
  Owned text;
  const clab_status st = clab_report_render(r, resolve_format(cfg.format, CLAB_FORMAT_TEXT), &text.p);
  const bool passed = clab_report_passed(r) != 0;
  clab_report_free(r);
  check(st);
  emit(cfg, text.str());
  return passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collatzlab: recurrent-form analysis of Collatz trajectories"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Config cfg;

  app.add_option("--workers", cfg.workers, "worker threads for range sweeps");
  app.add_option("--chunk", cfg.chunk, "starts per work chunk");
  app.add_flag("--no-memo", cfg.no_memo, "disable terminating-form memoization");
  app.add_option("--memo-budget", cfg.memo_budget, "memo table size limit in bytes");
  app.add_option("--step-cap", cfg.step_cap, "compressed-step limit per start");
  app.add_option("--format", cfg.format, "text | csv | structured");
  app.add_option("-o,--output", cfg.output, "write the report to a file");
  app.add_option("--checkpoint", cfg.checkpoint, "checkpoint file for long sweeps");
  app.add_option("--checkpoint-interval", cfg.checkpoint_interval, "starts between checkpoint saves");
  app.add_flag("--resume", cfg.resume, "continue from --checkpoint when it exists");
  app.add_option("--stop-at", cfg.stop_at, "stop (and checkpoint) after this start");
  app.add_flag("--no-timing", cfg.no_timing, "suppress the elapsed-time footer on stderr");

  auto* classify = app.add_subcommand("classify", "terminating form of one start");
  classify->add_option("n", cfg.value, "start value")->required();
  auto* trace = app.add_subcommand("trace", "compressed trajectory of one start");
  trace->add_option("n", cfg.value, "start value")->required();
  auto* fsm = app.add_subcommand("fsm-trace", "state-machine trace of one start");
  fsm->add_option("n", cfg.value, "start value")->required();

  auto* sweep = app.add_subcommand("sweep", "per-form counts over [1, N]");
  sweep->add_option("--max", cfg.max, "N")->required();
  sweep->add_option("--rows", cfg.rows, "extra row thresholds, space separated");

  auto* table3 = app.add_subcommand("table3", "frequency rows for N = 10^p");
  table3->add_option("--powers", cfg.powers, "range A-B or list p1,p2,...");

  auto* sets = app.add_subcommand("sets", "members of S(form) within [1, N]");
  sets->add_option("--form", cfg.form, "a..f")->required();
  sets->add_option("--max", cfg.max, "N")->required();
  sets->add_flag("--factor", cfg.factor, "include prime factorizations");
  sets->add_flag("--gaps", cfg.gaps, "report power-of-two gap structure");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", cfg.suite, "cycle | oracle | scaling | partition | memo | fsm")
      ->required();
  verify->add_option("--max", cfg.max, "suite bound (max m for cycle, x_max for scaling)");
  verify->add_option("--i-max", cfg.i_max, "scaling: largest power of two multiplier exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (*classify) code = run_trajectory(cfg, "classify");
    else if (*trace) code = run_trajectory(cfg, "trace");
    else if (*fsm) code = run_trajectory(cfg, "fsm-trace");
    else if (*sweep) code = run_sweep_like(cfg, false);
    else if (*table3) code = run_sweep_like(cfg, true);
    else if (*sets) code = run_sets(cfg);
    else if (*verify) code = run_verify(cfg);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.exit_code;
  }
  if (!cfg.no_timing) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::fprintf(stderr, "elapsed: %.3f s\n", secs);
  }
  return code;
}
