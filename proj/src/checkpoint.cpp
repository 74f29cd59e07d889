#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "collatzlab/sweep.hpp"

namespace collatzlab {
namespace {

constexpr std::string_view kMagic = "# collatzlab checkpoint";
constexpr std::string_view kDigestKey = "digest=";

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

[[noreturn]] void corrupt(const std::string& why) {
  throw CheckpointError(CheckpointError::Kind::Corrupt, "corrupted checkpoint: " + why);
}

u64 to_u64(std::string_view s) {
  if (s == "unlimited") return kUnlimited;
  u64 v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) corrupt("bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<u64> to_list(std::string_view s) {
  std::vector<u64> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(to_u64(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <std::size_t N>
std::array<u64, N> to_array(std::string_view s) {
  const auto list = to_list(s);
  if (list.size() != N) corrupt("expected " + std::to_string(N) + " values");
  std::array<u64, N> out{};
  std::copy(list.begin(), list.end(), out.begin());
  return out;
}

std::string limit_text(u64 v) { return v == kUnlimited ? "unlimited" : std::to_string(v); }

}  // namespace

std::string serialize(const Checkpoint& c) {
  std::string body;
  body += kMagic;
  body += '\n';
  body += fmt::format("schema_version={}\n", c.schema_version);
  body += fmt::format("target_n={}\n", c.target_n);
  body += fmt::format("next_unprocessed={}\n", c.next_unprocessed);
  body += fmt::format("counts={}\n", fmt::join(c.counts, ","));
  std::vector<std::string> limits;
  for (u64 v : c.capture) limits.push_back(limit_text(v));
  body += fmt::format("capture={}\n", fmt::join(limits, ","));
  body += fmt::format("thresholds={}\n", fmt::join(c.thresholds, ","));
  for (const auto& row : c.rows)
    body += fmt::format("row={}:{}\n", row.last, fmt::join(row.counts, ","));
  for (Form f : kForms)
    body += fmt::format("members.{}={}\n", label(f), fmt::join(c.members[index_of(f)], ","));
  body += fmt::format("wall_time_accumulated={}\n", c.wall_time_accumulated);
  body += fmt::format("{}{:016x}\n", kDigestKey, fnv1a64(body));
  return body;
}

Checkpoint parse_checkpoint(std::string_view text) {
  if (!text.starts_with(kMagic)) corrupt("missing header line");
  const auto digest_at = text.rfind(kDigestKey);
  if (digest_at == std::string_view::npos || (digest_at > 0 && text[digest_at - 1] != '\n'))
    corrupt("missing digest");
  std::string_view digest = text.substr(digest_at + kDigestKey.size());
  while (!digest.empty() && (digest.back() == '\n' || digest.back() == '\r')) digest.remove_suffix(1);
  if (digest != fmt::format("{:016x}", fnv1a64(text.substr(0, digest_at))))
    corrupt("digest mismatch");

  Checkpoint c;
  bool have_version = false;
  std::istringstream lines{std::string(text.substr(0, digest_at))};
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) corrupt("line without '=': " + line);
    const std::string_view key = std::string_view(line).substr(0, eq);
    const std::string_view value = std::string_view(line).substr(eq + 1);
    if (key == "schema_version") {
      c.schema_version = static_cast<int>(to_u64(value));
      have_version = true;
      if (c.schema_version != Checkpoint::kSchemaVersion)
        throw CheckpointError(CheckpointError::Kind::Version,
                              fmt::format("checkpoint schema_version {} is not supported (expected {})",
                                          c.schema_version, Checkpoint::kSchemaVersion));
    } else if (key == "target_n") {
      c.target_n = to_u64(value);
    } else if (key == "next_unprocessed") {
      c.next_unprocessed = to_u64(value);
    } else if (key == "counts") {
      c.counts = to_array<6>(value);
    } else if (key == "capture") {
      c.capture = to_array<6>(value);
    } else if (key == "thresholds") {
      c.thresholds = to_list(value);
    } else if (key == "row") {
      const auto colon = value.find(':');
      if (colon == std::string_view::npos) corrupt("row without ':'");
      c.rows.push_back({1, to_u64(value.substr(0, colon)), to_array<6>(value.substr(colon + 1))});
    } else if (key.starts_with("members.") && key.size() == 9) {
      const auto form = form_from_label(key[8]);
      if (!form) corrupt("unknown member form");
      c.members[index_of(*form)] = to_list(value);
    } else if (key == "wall_time_accumulated") {
      c.wall_time_accumulated = std::stod(std::string(value));
    } else {
      corrupt("unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_version) corrupt("missing schema_version");
  if (c.next_unprocessed == 0 || c.next_unprocessed > c.target_n + 1)
    corrupt("next_unprocessed outside [1, target_n + 1]");
  return c;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError(CheckpointError::Kind::Io, "cannot write " + tmp.string());
    out << serialize(checkpoint);
    out.flush();
    if (!out) throw CheckpointError(CheckpointError::Kind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError(CheckpointError::Kind::Io, "cannot move checkpoint into " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(CheckpointError::Kind::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

}  // namespace collatzlab
