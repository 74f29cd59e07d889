#pragma once

// Range enumeration over [1, N]: per-form counts, threshold snapshots,
// captured members, and checkpoint/resume for long runs.
//
// Work is cut into ascending chunks (also cut at every threshold), processed
// by a worker pool and merged strictly in chunk order, so the result does not
// depend on the worker count, the chunk size, memoization, or on whether the
// run was interrupted and resumed.

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collatzlab/classifier.hpp"
#include "collatzlab/report.hpp"

namespace collatzlab {

/// Counts over the inclusive start range [first, last].
struct FrequencyTable {
  u64 first = 1;
  u64 last = 0;
  FormCounts counts{};

  u64 n_total() const noexcept { return last - first + 1; }
  u64 count(Form f) const noexcept { return counts[index_of(f)]; }
  double frequency(Form f) const noexcept {
    return static_cast<double>(count(f)) / static_cast<double>(n_total());
  }

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;
};

/// Adds tables over disjoint ranges whose union is [1, M] for some M.
/// Throws RangeError on overlap, gap, or a union not starting at 1.
FrequencyTable merge(std::span<const FrequencyTable> tables);

inline constexpr u64 kUnlimited = ~u64{0};

using CaptureLimits = std::array<u64, 6>;
using Members = std::array<std::vector<u64>, 6>;

/// Nothing for a (about 97.6% of all starts), the first 10^5 for c,
/// everything for the rare forms.
inline constexpr CaptureLimits kDefaultCapture{0, kUnlimited, 100'000,
                                               kUnlimited, kUnlimited, kUnlimited};

struct SweepOptions {
  unsigned workers = 1;  // 1 runs inline on the calling thread
  u64 chunk = u64{1} << 16;
  bool memo = true;
  u64 memo_budget_bytes = kDefaultMemoBudgetBytes;
  u64 step_cap = kDefaultStepCap;
  CaptureLimits capture = kDefaultCapture;

  std::optional<std::filesystem::path> checkpoint_path;
  u64 checkpoint_interval = u64{1} << 24;  // starts between saves
  bool resume = false;                     // continue from checkpoint_path if it exists
  std::optional<u64> halt_after;           // stop (and save) once [1, halt_after] is done
};

struct SweepResult {
  u64 target_n = 0;
  std::vector<FrequencyTable> rows;  // cumulative from 1, one per threshold reached
  Members members;                   // ascending, truncated to the capture limits
  CaptureLimits capture = kDefaultCapture;
  bool complete = false;
  u64 next_unprocessed = 1;
  double wall_seconds = 0;  // accumulated across resumed segments
};

/// Classifies every start in [1, n]. A row is emitted at each threshold and
/// at n itself. Throws StepCapExceeded naming the lowest offending start.
SweepResult sweep(u64 n, const SweepOptions& options = {},
                  std::span<const u64> thresholds = {});

/// Rows for N = 10^p, p in `powers` (nonempty, ascending), from one pass.
SweepResult emit_table3(std::span<const unsigned> powers, const SweepOptions& options = {});

/// Frequency rendered with 6 significant digits, trailing zeros kept.
std::string format_frequency(u64 count, u64 n);

/// Header `N,N_a,...,N_f,freq_a,...,freq_f` and one line per row.
std::string render_csv(const SweepResult& result);
std::string render_json(const SweepResult& result);
std::string render_text(const SweepResult& result);

struct Checkpoint {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  u64 target_n = 0;
  u64 next_unprocessed = 1;
  FormCounts counts{};  // exactly the starts in [1, next_unprocessed)
  CaptureLimits capture = kDefaultCapture;
  Members members;
  std::vector<u64> thresholds;
  std::vector<FrequencyTable> rows;
  double wall_time_accumulated = 0;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Self-describing key=value text closed by an FNV-1a digest line.
std::string serialize(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(std::string_view text);

/// Written to a sibling temporary and renamed into place.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Counts sum to N at every row, each power of two lands in its cycle form,
/// and the rare forms b, d, f hold only powers of two.
Report verify_partition(u64 max, const SweepOptions& options = {});

/// Byte-identical CSV across worker counts {1, 2, 8} and memo on/off.
Report verify_memo(u64 max, const SweepOptions& options = {});

}  // namespace collatzlab
