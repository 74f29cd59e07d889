#include "collatzlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"

namespace collatzlab {
namespace {

struct Chunk {
  u64 first = 0;
  u64 last = 0;
};

struct ChunkResult {
  FormCounts counts{};
  Members members;
  std::exception_ptr error;
};

std::vector<u64> normalize_thresholds(u64 n, std::span<const u64> thresholds) {
  std::vector<u64> out(thresholds.begin(), thresholds.end());
  for (u64 t : out) {
    if (t == 0 || t > n) throw InvalidArgument(fmt::format("threshold {} outside [1, {}]", t, n));
  }
  out.push_back(n);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Chunks covering [first, last], also cut right after every threshold.
std::vector<Chunk> plan_chunks(u64 first, u64 last, u64 chunk, const std::vector<u64>& thresholds) {
  std::vector<Chunk> out;
  auto next_cut = std::lower_bound(thresholds.begin(), thresholds.end(), first);
  u64 lo = first;
  while (lo <= last) {
    u64 hi = last - lo >= chunk - 1 ? lo + (chunk - 1) : last;
    while (next_cut != thresholds.end() && *next_cut < lo) ++next_cut;
    if (next_cut != thresholds.end() && *next_cut < hi) hi = *next_cut;
    out.push_back({lo, hi});
    if (hi == last) break;
    lo = hi + 1;
  }
  return out;
}

void run_chunk(const Chunk& chunk, FormMemo* memo, const SweepOptions& options,
               ChunkResult& out) {
  try {
    for (u64 v = chunk.first;; ++v) {
      const Form f = terminating_form(v, memo, options.step_cap);
      if (memo != nullptr) memo->store(v, f);
      const auto i = index_of(f);
      ++out.counts[i];
      if (out.members[i].size() < options.capture[i]) out.members[i].push_back(v);
      if (v == chunk.last) break;
    }
  } catch (...) {
    out.error = std::current_exception();
  }
}

void run_chunks(const std::vector<Chunk>& chunks, FormMemo* memo, const SweepOptions& options,
                std::vector<ChunkResult>& results) {
  results.assign(chunks.size(), ChunkResult{});
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(options.workers, chunks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < chunks.size(); ++i) run_chunk(chunks[i], memo, options, results[i]);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < chunks.size(); i = next.fetch_add(1))
        run_chunk(chunks[i], memo, options, results[i]);
    });
  }
}

void append_members(Members& into, const Members& from, const CaptureLimits& limits) {
  for (std::size_t i = 0; i < 6; ++i) {
    auto& dst = into[i];
    for (u64 v : from[i]) {
      if (dst.size() >= limits[i]) break;
      dst.push_back(v);
    }
  }
}

Checkpoint fresh_state(u64 n, const std::vector<u64>& thresholds, const SweepOptions& options) {
  Checkpoint st;
  st.target_n = n;
  st.capture = options.capture;
  st.thresholds = thresholds;
  return st;
}

Checkpoint initial_state(u64 n, const std::vector<u64>& thresholds, const SweepOptions& options) {
  if (!options.resume || !options.checkpoint_path ||
      !std::filesystem::exists(*options.checkpoint_path))
    return fresh_state(n, thresholds, options);
  Checkpoint st = load_checkpoint(*options.checkpoint_path);
  if (st.target_n != n || st.thresholds != thresholds || st.capture != options.capture) {
    throw CheckpointError(CheckpointError::Kind::Mismatch,
                          "checkpoint " + options.checkpoint_path->string() +
                              " was written for a different sweep configuration");
  }
  return st;
}

}  // namespace

FrequencyTable merge(std::span<const FrequencyTable> tables) {
  if (tables.empty()) throw RangeError("nothing to merge");
  std::vector<FrequencyTable> sorted(tables.begin(), tables.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  FrequencyTable out;
  out.first = 1;
  out.last = 0;
  for (const auto& t : sorted) {
    if (t.first == 0 || t.last < t.first) throw RangeError("table with an empty or invalid range");
    if (t.first <= out.last)
      throw RangeError(fmt::format("ranges overlap at {}", t.first));
    if (t.first != out.last + 1)
      throw RangeError(fmt::format("gap: [{}, {}] missing", out.last + 1, t.first - 1));
    for (std::size_t i = 0; i < 6; ++i) out.counts[i] += t.counts[i];
    out.last = t.last;
  }
  return out;
}

SweepResult sweep(u64 n, const SweepOptions& options, std::span<const u64> thresholds_in) {
  if (n == 0) throw InvalidArgument("sweep bound must be >= 1");
  if (options.workers == 0) throw InvalidArgument("worker count must be >= 1");
  if (options.chunk == 0) throw InvalidArgument("chunk size must be >= 1");
  if (options.checkpoint_interval == 0) throw InvalidArgument("checkpoint interval must be >= 1");
  if (options.step_cap == 0) throw InvalidArgument("step cap must be >= 1");

  const auto thresholds = normalize_thresholds(n, thresholds_in);
  Checkpoint st = initial_state(n, thresholds, options);

  std::optional<FormMemo> memo;
  if (options.memo) memo.emplace(FormMemo::with_budget(n, options.memo_budget_bytes));
  FormMemo* memo_ptr = memo ? &*memo : nullptr;

  const u64 stop = std::min(n, options.halt_after.value_or(n));
  std::vector<ChunkResult> results;
  while (st.next_unprocessed <= stop) {
    const auto started = std::chrono::steady_clock::now();
    u64 batch_last = stop;
    if (options.checkpoint_path && stop - st.next_unprocessed >= options.checkpoint_interval)
      batch_last = st.next_unprocessed + options.checkpoint_interval - 1;

    const auto chunks = plan_chunks(st.next_unprocessed, batch_last, options.chunk, thresholds);
    run_chunks(chunks, memo_ptr, options, results);

    for (std::size_t i = 0; i < chunks.size(); ++i) {
      auto& r = results[i];
      if (r.error) std::rethrow_exception(r.error);
      for (std::size_t k = 0; k < 6; ++k) st.counts[k] += r.counts[k];
      append_members(st.members, r.members, st.capture);
      if (std::binary_search(thresholds.begin(), thresholds.end(), chunks[i].last))
        st.rows.push_back({1, chunks[i].last, st.counts});
    }
    st.next_unprocessed = batch_last + 1;
    st.wall_time_accumulated +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (options.checkpoint_path) save_checkpoint(st, *options.checkpoint_path);
  }

  SweepResult out;
  out.target_n = n;
  out.rows = std::move(st.rows);
  out.members = std::move(st.members);
  out.capture = st.capture;
  out.next_unprocessed = st.next_unprocessed;
  out.complete = st.next_unprocessed > n;
  out.wall_seconds = st.wall_time_accumulated;
  return out;
}

SweepResult emit_table3(std::span<const unsigned> powers, const SweepOptions& options) {
  if (powers.empty()) throw InvalidArgument("at least one power is required");
  if (!std::is_sorted(powers.begin(), powers.end()) ||
      std::adjacent_find(powers.begin(), powers.end()) != powers.end())
    throw InvalidArgument("powers must be strictly ascending");
  if (powers.back() > 19) throw InvalidArgument("10^p must fit in 64 bits (p <= 19)");
  std::vector<u64> thresholds;
  for (unsigned p : powers) {
    u64 t = 1;
    for (unsigned i = 0; i < p; ++i) t *= 10;
    thresholds.push_back(t);
  }
  return sweep(thresholds.back(), options, thresholds);
}

std::string format_frequency(u64 count, u64 n) {
  return fmt::format("{:#.6g}", static_cast<double>(count) / static_cast<double>(n));
}

std::string render_csv(const SweepResult& result) {
  std::string out = "N,N_a,N_b,N_c,N_d,N_e,N_f,freq_a,freq_b,freq_c,freq_d,freq_e,freq_f\n";
  for (const auto& row : result.rows) {
    out += std::to_string(row.n_total());
    for (u64 c : row.counts) out += fmt::format(",{}", c);
    for (u64 c : row.counts) out += "," + format_frequency(c, row.n_total());
    out += '\n';
  }
  return out;
}

std::string render_json(const SweepResult& result) {
  nlohmann::ordered_json j;
  j["target_n"] = result.target_n;
  j["complete"] = result.complete;
  j["next_unprocessed"] = result.next_unprocessed;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) {
    nlohmann::ordered_json counts, freqs;
    for (Form f : kForms) {
      const std::string key(1, label(f));
      counts[key] = row.count(f);
      freqs[key] = format_frequency(row.count(f), row.n_total());
    }
    j["rows"].push_back({{"N", row.n_total()}, {"counts", counts}, {"frequencies", freqs}});
  }
  nlohmann::ordered_json members = nlohmann::ordered_json::object();
  for (Form f : kForms) {
    if (result.capture[index_of(f)] == 0) continue;
    members[std::string(1, label(f))] = result.members[index_of(f)];
  }
  j["members"] = members;
  return j.dump(2) + "\n";
}

std::string render_text(const SweepResult& result) {
  std::string out = fmt::format("{:>14}", "N");
  for (Form f : kForms) out += fmt::format("  {:>12}", fmt::format("N({})", label(f)));
  out += '\n';
  for (const auto& row : result.rows) {
    out += fmt::format("{:>14}", row.n_total());
    for (u64 c : row.counts) out += fmt::format("  {:>12}", format_frequency(c, row.n_total()));
    out += '\n';
    out += fmt::format("{:>14}", "");
    for (u64 c : row.counts) out += fmt::format("  {:>12}", c);
    out += '\n';
  }
  if (!result.complete)
    out += fmt::format("incomplete: next unprocessed start {}\n", result.next_unprocessed);
  return out;
}

Report verify_partition(u64 max, const SweepOptions& options) {
  Report report{"partition", {}};
  SweepOptions opts = options;
  opts.capture = {0, kUnlimited, 0, kUnlimited, kUnlimited, kUnlimited};
  opts.checkpoint_path.reset();
  opts.halt_after.reset();

  std::vector<u64> thresholds;
  for (u64 t = 10; t <= max; t *= 10) {
    thresholds.push_back(t);
    if (t > max / 10) break;
  }
  const auto result = sweep(max, opts, thresholds);

  Check sums{"counts sum to N at every row"};
  for (const auto& row : result.rows) {
    ++sums.cases;
    u64 total = 0;
    for (u64 c : row.counts) total += c;
    if (sums.passed && total != row.n_total()) {
      sums.passed = false;
      sums.counterexample = fmt::format("N={} sums to {}", row.n_total(), total);
    }
  }

  Check powers{"every 2^m <= N lies in form [d,c,b,a,f,e][m mod 6]"};
  for (unsigned m = 0; m < 64 && (u64{1} << m) <= max; ++m) {
    ++powers.cases;
    const u64 p = u64{1} << m;
    const Form f = terminating_form(p, nullptr, opts.step_cap);
    if (powers.passed && f != power_of_two_form(m)) {
      powers.passed = false;
      powers.counterexample = fmt::format("2^{} classified as {}", m, label(f));
    }
  }

  Check rare{"forms b, d, f contain only powers of two"};
  for (Form f : {Form::b, Form::d, Form::f}) {
    for (u64 v : result.members[index_of(f)]) {
      ++rare.cases;
      if (rare.passed && !is_power_of_two(v)) {
        // A genuine finding would have to survive the raw-trajectory oracle.
        const Form oracle = raw_subsequence_form(v);
        rare.passed = false;
        rare.counterexample = fmt::format("{} classifies to {} (raw oracle: {})", v, label(f),
                                          label(oracle));
      }
    }
  }
  report.checks = {sums, powers, rare};
  return report;
}

Report verify_memo(u64 max, const SweepOptions& options) {
  Report report{"memo", {}};
  SweepOptions base = options;
  base.checkpoint_path.reset();
  base.halt_after.reset();
  base.chunk = std::max<u64>(1, std::min<u64>(base.chunk, max / 16 + 1));

  std::vector<u64> thresholds;
  for (u64 t = 10; t < max; t *= 10) thresholds.push_back(t);

  base.workers = 1;
  base.memo = false;
  const auto baseline = sweep(max, base, thresholds);
  const std::string reference = render_csv(baseline) + render_json(baseline);
  Check check{"CSV and member lists identical across workers {1,2,8} x memo {on,off}"};
  for (unsigned workers : {1u, 2u, 8u}) {
    for (bool memo : {true, false}) {
      SweepOptions o = base;
      o.workers = workers;
      o.memo = memo;
      const auto r = sweep(max, o, thresholds);
      ++check.cases;
      if (check.passed && render_csv(r) + render_json(r) != reference) {
        check.passed = false;
        check.counterexample = fmt::format("workers={} memo={}", workers, memo ? "on" : "off");
      }
    }
  }
  report.checks = {check};
  return report;
}

}  // namespace collatzlab
