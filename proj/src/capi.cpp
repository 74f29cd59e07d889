#include "collatzlab/collatzlab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "collatzlab/analysis.hpp"
#include "collatzlab/fsm.hpp"
#include "collatzlab/parse.hpp"
#include "collatzlab/sweep.hpp"
#include "json.hpp"

namespace cl = collatzlab;

struct clab_trajectory {
  enum class Kind { classify, trace, fsm } kind = Kind::classify;
  std::string start;
  char form = 0;
  std::uint64_t exponent = 0;
  std::uint64_t steps = 0;
  std::uint64_t entry_steps = 0;
  std::string peak;
  std::vector<std::string> values;
  std::vector<char> state_forms;
  std::vector<std::string> state_indices;
};

struct clab_sweep {
  cl::SweepResult result;
};

struct clab_report {
  cl::Report report;
};

namespace {

thread_local std::string last_error;

clab_status fail(clab_status status, const char* what) {
  last_error = what;
  return status;
}

template <class F>
clab_status guard(F&& body) noexcept {
  try {
    last_error.clear();
    body();
    return CLAB_OK;
  } catch (const cl::StepCapExceeded& e) {
    return fail(CLAB_STEP_CAP_EXCEEDED, e.what());
  } catch (const cl::OverflowError& e) {
    return fail(CLAB_OVERFLOW, e.what());
  } catch (const cl::InvalidArgument& e) {
    return fail(CLAB_INVALID_ARGUMENT, e.what());
  } catch (const cl::RangeError& e) {
    return fail(CLAB_RANGE_ERROR, e.what());
  } catch (const cl::CheckpointError& e) {
    switch (e.kind()) {
      case cl::CheckpointError::Kind::Io: return fail(CLAB_IO_ERROR, e.what());
      case cl::CheckpointError::Kind::Version: return fail(CLAB_CHECKPOINT_VERSION, e.what());
      case cl::CheckpointError::Kind::Corrupt: return fail(CLAB_CHECKPOINT_CORRUPT, e.what());
      case cl::CheckpointError::Kind::Mismatch: return fail(CLAB_CHECKPOINT_MISMATCH, e.what());
    }
    return fail(CLAB_INTERNAL_ERROR, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(CLAB_IO_ERROR, e.what());
  } catch (const std::exception& e) {
    return fail(CLAB_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(CLAB_INTERNAL_ERROR, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw cl::InvalidArgument(std::string(what) + " must not be null");
}

cl::BigInt parse_start(const char* text) {
  require(text, "value");
  return cl::parse_value(text);
}

cl::Form parse_form(char c) {
  const auto form = cl::form_from_label(c);
  if (!form) throw cl::InvalidArgument(fmt::format("unknown form '{}' (expected a..f)", c));
  return *form;
}

cl::OutputFormat to_format(clab_format f) {
  switch (f) {
    case CLAB_FORMAT_TEXT: return cl::OutputFormat::text;
    case CLAB_FORMAT_CSV: return cl::OutputFormat::csv;
    case CLAB_FORMAT_STRUCTURED: return cl::OutputFormat::structured;
  }
  throw cl::InvalidArgument("unknown output format");
}

cl::SweepOptions to_options(const clab_sweep_options* o) {
  cl::SweepOptions out;
  if (o == nullptr) return out;
  if (o->workers == 0) throw cl::InvalidArgument("worker count must be >= 1");
  if (o->step_cap == 0) throw cl::InvalidArgument("step cap must be >= 1");
  out.workers = o->workers;
  out.chunk = o->chunk;
  out.memo = o->memo != 0;
  out.memo_budget_bytes = o->memo_budget_bytes;
  out.step_cap = o->step_cap;
  for (std::size_t i = 0; i < 6; ++i) out.capture[i] = o->capture_limit[i];
  if (o->checkpoint_path != nullptr && *o->checkpoint_path != '\0')
    out.checkpoint_path = o->checkpoint_path;
  out.checkpoint_interval = o->checkpoint_interval;
  out.resume = o->resume != 0;
  if (o->halt_after != 0) out.halt_after = o->halt_after;
  return out;
}

// JSON number when it fits 64 bits, decimal string beyond.
nlohmann::ordered_json json_value(const std::string& decimal) {
  if (decimal.size() < 20) return std::stoull(decimal);
  return decimal;
}

std::string power_text(std::uint64_t m) {
  if (m < 64) return fmt::format("2^{} = {}", m, std::uint64_t{1} << m);
  return fmt::format("2^{}", m);
}

std::string render_trajectory(const clab_trajectory& t, cl::OutputFormat format) {
  using Kind = clab_trajectory::Kind;
  const unsigned r = cl::residue(*cl::form_from_label(t.form));
  if (format == cl::OutputFormat::structured) {
    nlohmann::ordered_json j;
    j["start"] = json_value(t.start);
    j["form"] = std::string(1, t.form);
    j["residue"] = r;
    j["stopping_exponent"] = t.exponent;
    j["compressed_steps"] = t.steps;
    j["peak"] = json_value(t.peak);
    if (t.kind == Kind::trace) {
      auto& arr = j["trajectory"] = nlohmann::ordered_json::array();
      for (const auto& v : t.values) arr.push_back(json_value(v));
    } else if (t.kind == Kind::fsm) {
      j["entry_steps"] = t.entry_steps;
      auto& arr = j["states"] = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < t.values.size(); ++i) {
        arr.push_back({{"form", std::string(1, t.state_forms[i])},
                       {"index", json_value(t.state_indices[i])},
                       {"value", json_value(t.values[i])}});
      }
    }
    return j.dump(2) + "\n";
  }

  if (format == cl::OutputFormat::csv) {
    std::string out;
    switch (t.kind) {
      case Kind::classify:
        out = "start,form,residue,stopping_exponent,compressed_steps,peak\n";
        out += fmt::format("{},{},{},{},{},{}\n", t.start, t.form, r, t.exponent, t.steps, t.peak);
        break;
      case Kind::trace:
        out = "step,value,form\n";
        for (std::size_t i = 0; i < t.values.size(); ++i) {
          const auto f = cl::form_of(cl::BigInt(t.values[i]));
          out += fmt::format("{},{},{}\n", i, t.values[i], f ? cl::label(*f) : '-');
        }
        break;
      case Kind::fsm:
        out = "step,form,index,value\n";
        for (std::size_t i = 0; i < t.values.size(); ++i) {
          out += fmt::format("{},{},{},{}\n", t.entry_steps + i, t.state_forms[i],
                             t.state_indices[i], t.values[i]);
        }
        break;
    }
    return out;
  }

  std::string out = fmt::format("{}: form {} (9n+{}), stopping power {}, {} compressed step{}, peak {}\n",
                                t.start, t.form, r, power_text(t.exponent), t.steps,
                                t.steps == 1 ? "" : "s", t.peak);
  if (t.kind == Kind::trace) {
    out += fmt::format("{}\n", fmt::join(t.values, " -> "));
  } else if (t.kind == Kind::fsm) {
    out += fmt::format("entry: {} compressed step{} to {}\n", t.entry_steps,
                       t.entry_steps == 1 ? "" : "s", t.values.front());
    std::vector<std::string> states;
    for (std::size_t i = 0; i < t.values.size(); ++i)
      states.push_back(fmt::format("({},{})", t.state_forms[i], t.state_indices[i]));
    out += fmt::format("{}\n", fmt::join(states, " -> "));
    out += fmt::format("terminating form {}\n", t.form);
  }
  return out;
}

void fill_classification(clab_trajectory& t, const cl::Classification<cl::BigInt>& c) {
  t.start = c.start.str();
  t.form = cl::label(c.terminating_form);
  t.exponent = c.stopping_exponent;
  t.steps = c.compressed_steps;
  t.peak = c.peak.str();
}

}  // namespace

extern "C" {

CLAB_API const char* clab_version(void) { return "1.0.0"; }

CLAB_API const char* clab_status_name(clab_status status) {
  switch (status) {
    case CLAB_OK: return "ok";
    case CLAB_INVALID_ARGUMENT: return "invalid argument";
    case CLAB_OVERFLOW: return "overflow";
    case CLAB_STEP_CAP_EXCEEDED: return "step cap exceeded";
    case CLAB_IO_ERROR: return "i/o error";
    case CLAB_CHECKPOINT_VERSION: return "checkpoint version mismatch";
    case CLAB_CHECKPOINT_CORRUPT: return "corrupted checkpoint";
    case CLAB_CHECKPOINT_MISMATCH: return "checkpoint configuration mismatch";
    case CLAB_RANGE_ERROR: return "range error";
    case CLAB_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

CLAB_API const char* clab_last_error(void) { return last_error.c_str(); }

CLAB_API void clab_string_free(char* s) { std::free(s); }

CLAB_API void clab_u64_free(uint64_t* p) { std::free(p); }

CLAB_API clab_status clab_parse_count(const char* text, uint64_t* out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    *out = cl::parse_count(text);
  });
}

CLAB_API clab_status clab_form_of(const char* value, char* label) {
  return guard([&] {
    require(label, "label");
    const auto f = cl::form_of(parse_start(value));
    *label = f ? cl::label(*f) : '\0';
  });
}

CLAB_API clab_status clab_mod4(const char* value, char* label, char* reduced, size_t capacity) {
  return guard([&] {
    require(label, "label");
    const cl::BigInt v = parse_start(value);
    *label = cl::label(cl::mod4_class(v));
    if (reduced != nullptr) {
      const std::string text = cl::mod4_reduce(v).str();
      if (text.size() + 1 > capacity) throw cl::InvalidArgument("reduced buffer too small");
      std::memcpy(reduced, text.c_str(), text.size() + 1);
    }
  });
}

CLAB_API clab_status clab_classify(const char* start, uint64_t step_cap, clab_trajectory** out) {
  return guard([&] {
    require(out, "out");
    auto t = std::make_unique<clab_trajectory>();
    fill_classification(*t, cl::classify(parse_start(start), step_cap));
    *out = t.release();
  });
}

CLAB_API clab_status clab_trace(const char* start, uint64_t step_cap, clab_trajectory** out) {
  return guard([&] {
    require(out, "out");
    auto t = std::make_unique<clab_trajectory>();
    t->kind = clab_trajectory::Kind::trace;
    const auto trace = cl::classify_trace(parse_start(start), step_cap);
    fill_classification(*t, trace.result);
    for (const auto& v : trace.values) t->values.push_back(v.str());
    *out = t.release();
  });
}

CLAB_API clab_status clab_fsm_trace(const char* start, uint64_t step_cap, clab_trajectory** out) {
  return guard([&] {
    require(out, "out");
    const cl::BigInt v = parse_start(start);
    auto t = std::make_unique<clab_trajectory>();
    t->kind = clab_trajectory::Kind::fsm;
    const auto trace = cl::fsm_trace(v, step_cap);
    fill_classification(*t, cl::classify(v, step_cap));
    t->entry_steps = trace.entry_steps;
    for (const auto& s : trace.states) {
      t->values.push_back(s.value().str());
      t->state_forms.push_back(cl::label(s.form));
      t->state_indices.push_back(s.index.str());
    }
    *out = t.release();
  });
}

CLAB_API char clab_trajectory_form(const clab_trajectory* t) { return t ? t->form : '\0'; }
CLAB_API uint64_t clab_trajectory_exponent(const clab_trajectory* t) { return t ? t->exponent : 0; }
CLAB_API uint64_t clab_trajectory_steps(const clab_trajectory* t) { return t ? t->steps : 0; }
CLAB_API const char* clab_trajectory_start(const clab_trajectory* t) {
  return t ? t->start.c_str() : nullptr;
}
CLAB_API const char* clab_trajectory_peak(const clab_trajectory* t) {
  return t ? t->peak.c_str() : nullptr;
}
CLAB_API uint64_t clab_trajectory_entry_steps(const clab_trajectory* t) {
  return t ? t->entry_steps : 0;
}
CLAB_API size_t clab_trajectory_length(const clab_trajectory* t) { return t ? t->values.size() : 0; }
CLAB_API const char* clab_trajectory_value(const clab_trajectory* t, size_t i) {
  return t && i < t->values.size() ? t->values[i].c_str() : nullptr;
}
CLAB_API char clab_trajectory_state_form(const clab_trajectory* t, size_t i) {
  return t && i < t->state_forms.size() ? t->state_forms[i] : '\0';
}
CLAB_API const char* clab_trajectory_state_index(const clab_trajectory* t, size_t i) {
  return t && i < t->state_indices.size() ? t->state_indices[i].c_str() : nullptr;
}

CLAB_API clab_status clab_trajectory_render(const clab_trajectory* t, clab_format format, char** out) {
  return guard([&] {
    require(t, "trajectory");
    require(out, "out");
    *out = dup_string(render_trajectory(*t, to_format(format)));
  });
}

CLAB_API void clab_trajectory_free(clab_trajectory* t) { delete t; }

CLAB_API void clab_sweep_options_init(clab_sweep_options* o) {
  if (o == nullptr) return;
  const cl::SweepOptions d;
  *o = clab_sweep_options{};
  o->workers = d.workers;
  o->chunk = d.chunk;
  o->memo = d.memo ? 1 : 0;
  o->memo_budget_bytes = d.memo_budget_bytes;
  o->step_cap = d.step_cap;
  for (std::size_t i = 0; i < 6; ++i) o->capture_limit[i] = d.capture[i];
  o->checkpoint_path = nullptr;
  o->checkpoint_interval = d.checkpoint_interval;
  o->resume = 0;
  o->halt_after = 0;
}

CLAB_API clab_status clab_sweep_run(uint64_t n, const uint64_t* thresholds, size_t threshold_count,
                                    const clab_sweep_options* options, clab_sweep** out) {
  return guard([&] {
    require(out, "out");
    if (threshold_count != 0) require(thresholds, "thresholds");
    auto s = std::make_unique<clab_sweep>();
    s->result = cl::sweep(n, to_options(options),
                          std::span<const std::uint64_t>(thresholds, threshold_count));
    *out = s.release();
  });
}

CLAB_API clab_status clab_table3(const uint32_t* powers, size_t count,
                                 const clab_sweep_options* options, clab_sweep** out) {
  return guard([&] {
    require(out, "out");
    if (count != 0) require(powers, "powers");
    std::vector<unsigned> p(powers, powers + count);
    auto s = std::make_unique<clab_sweep>();
    s->result = cl::emit_table3(p, to_options(options));
    *out = s.release();
  });
}

CLAB_API size_t clab_sweep_row_count(const clab_sweep* s) { return s ? s->result.rows.size() : 0; }

CLAB_API clab_status clab_sweep_row(const clab_sweep* s, size_t row, uint64_t* n, uint64_t counts[6]) {
  return guard([&] {
    require(s, "sweep");
    if (row >= s->result.rows.size()) throw cl::InvalidArgument("row index out of range");
    const auto& r = s->result.rows[row];
    if (n != nullptr) *n = r.n_total();
    if (counts != nullptr)
      for (std::size_t i = 0; i < 6; ++i) counts[i] = r.counts[i];
  });
}

CLAB_API clab_status clab_sweep_members(const clab_sweep* s, char form, const uint64_t** data,
                                        size_t* length) {
  return guard([&] {
    require(s, "sweep");
    require(data, "data");
    require(length, "length");
    const auto& m = s->result.members[cl::index_of(parse_form(form))];
    *data = m.data();
    *length = m.size();
  });
}

CLAB_API int clab_sweep_complete(const clab_sweep* s) { return s && s->result.complete ? 1 : 0; }
CLAB_API uint64_t clab_sweep_next_unprocessed(const clab_sweep* s) {
  return s ? s->result.next_unprocessed : 0;
}
CLAB_API double clab_sweep_wall_seconds(const clab_sweep* s) { return s ? s->result.wall_seconds : 0; }

CLAB_API clab_status clab_sweep_render(const clab_sweep* s, clab_format format, char** out) {
  return guard([&] {
    require(s, "sweep");
    require(out, "out");
    switch (to_format(format)) {
      case cl::OutputFormat::csv: *out = dup_string(cl::render_csv(s->result)); break;
      case cl::OutputFormat::structured: *out = dup_string(cl::render_json(s->result)); break;
      case cl::OutputFormat::text: *out = dup_string(cl::render_text(s->result)); break;
    }
  });
}

CLAB_API void clab_sweep_free(clab_sweep* s) { delete s; }

CLAB_API clab_status clab_factorize(const char* value, char** out) {
  return guard([&] {
    require(out, "out");
    *out = dup_string(cl::factorize(parse_start(value)).to_string());
  });
}

CLAB_API clab_status clab_build_set(char form, uint64_t bound, const clab_sweep_options* options,
                                    uint64_t** members, size_t* length) {
  return guard([&] {
    require(members, "members");
    require(length, "length");
    const auto set = cl::build_set(parse_form(form), bound, to_options(options));
    auto* buf = static_cast<uint64_t*>(std::malloc(std::max<std::size_t>(1, set.size()) * sizeof(uint64_t)));
    if (buf == nullptr) throw std::bad_alloc();
    std::copy(set.begin(), set.end(), buf);
    *members = buf;
    *length = set.size();
  });
}

CLAB_API clab_status clab_set_report(char form, uint64_t bound, int with_factors, int with_gaps,
                                     const clab_sweep_options* options, clab_format format,
                                     char** out) {
  return guard([&] {
    require(out, "out");
    const auto report = cl::set_report(parse_form(form), bound, with_factors != 0, with_gaps != 0,
                                       to_options(options));
    *out = dup_string(cl::render_set_report(report, to_format(format)));
  });
}

CLAB_API clab_status clab_verify(const char* suite, uint64_t max, uint64_t aux,
                                 const clab_sweep_options* options, clab_report** out) {
  return guard([&] {
    require(suite, "suite");
    require(out, "out");
    const std::string name = suite;
    const auto opts = to_options(options);
    auto pick = [](uint64_t v, uint64_t fallback) { return v == 0 ? fallback : v; };
    auto r = std::make_unique<clab_report>();
    if (name == "cycle") {
      const auto m = pick(max, 600);
      if (m > 1'000'000) throw cl::InvalidArgument("cycle suite supports max m <= 10^6");
      r->report = cl::verify_power2_cycle(static_cast<unsigned>(m));
    } else if (name == "oracle") {
      r->report = cl::verify_oracle(pick(max, 100'000), opts.step_cap);
    } else if (name == "scaling") {
      r->report = cl::verify_scaling(pick(max, 10'000), static_cast<unsigned>(pick(aux, 20)),
                                     opts.step_cap);
    } else if (name == "partition") {
      r->report = cl::verify_partition(pick(max, 1'000'000), opts);
    } else if (name == "memo") {
      r->report = cl::verify_memo(pick(max, 100'000), opts);
    } else if (name == "fsm") {
      r->report = cl::verify_fsm(pick(max, 1'000'000), pick(aux, 100'000), opts.step_cap);
    } else {
      throw cl::InvalidArgument("unknown suite '" + name +
                                "' (cycle, oracle, scaling, partition, memo, fsm)");
    }
    *out = r.release();
  });
}

CLAB_API int clab_report_passed(const clab_report* r) { return r && r->report.passed() ? 1 : 0; }
CLAB_API size_t clab_report_check_count(const clab_report* r) {
  return r ? r->report.checks.size() : 0;
}

CLAB_API clab_status clab_report_render(const clab_report* r, clab_format format, char** out) {
  return guard([&] {
    require(r, "report");
    require(out, "out");
    switch (to_format(format)) {
      case cl::OutputFormat::csv: *out = dup_string(r->report.render_csv()); break;
      case cl::OutputFormat::structured: *out = dup_string(r->report.render_json()); break;
      case cl::OutputFormat::text: *out = dup_string(r->report.render_text()); break;
    }
  });
}

CLAB_API void clab_report_free(clab_report* r) { delete r; }

}  // extern "C"
