#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "screme/timing_sim.hpp"

namespace screme::timing {

std::vector<MemRequest> parse_trace(std::istream& in) {
  std::vector<MemRequest> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    uint64_t cycle;
    std::string kind, addr;
    if (!(ls >> cycle)) {
      std::string tok;
      std::istringstream probe(line);
      if (!(probe >> tok)) continue;  // blank / comment-only line
      throw TraceParseError("bad arrival cycle", line_no);
    }
    if (!(ls >> kind >> addr)) throw TraceParseError("expected '<cycle> <R|W> <hex_addr>'", line_no);
    if (kind != "R" && kind != "W") throw TraceParseError("kind must be R or W", line_no);
    uint64_t a = 0;
    std::string_view av = addr;
    if (av.starts_with("0x") || av.starts_with("0X")) av.remove_prefix(2);
    auto [p, ec] = std::from_chars(av.data(), av.data() + av.size(), a, 16);
    if (ec != std::errc() || p != av.data() + av.size())
      throw TraceParseError("bad hex address", line_no);
    if (!out.empty() && cycle < out.back().arrival)
      throw TraceParseError("trace not sorted by arrival cycle", line_no);
    out.push_back({cycle, kind == "W", a});
  }
  return out;
}

std::vector<MemRequest> load_trace(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw TraceParseError("cannot open trace file: " + path, 0);
  return parse_trace(f);
}

void write_trace(std::ostream& out, std::span<const MemRequest> trace) {
  char buf[64];
  for (const MemRequest& r : trace) {
    snprintf(buf, sizeof buf, "%llu %c 0x%llx\n", static_cast<unsigned long long>(r.arrival),
             r.is_write ? 'W' : 'R', static_cast<unsigned long long>(r.addr));
    out << buf;
  }
}

std::vector<MemRequest> generate_trace(const TraceProfile& profile, uint64_t seed) {
  if (profile.read_fraction < 0.0 || profile.read_fraction > 1.0)
    throw std::invalid_argument("trace profile: read_fraction must be in [0,1]");
  if (profile.arrival_rate <= 0.0)
    throw std::invalid_argument("trace profile: arrival_rate must be positive");
  if (profile.footprint_bytes < 64)
    throw std::invalid_argument("trace profile: footprint below one cacheline");
  if (profile.locality < 0.0 || profile.locality > 1.0)
    throw std::invalid_argument("trace profile: locality must be in [0,1]");

  Rng rng(Rng::derive(seed, {0x72616365}));
  std::vector<MemRequest> out;
  out.reserve(profile.length);
  const uint64_t lines = profile.footprint_bytes / 64;
  const uint64_t lines_per_row = 128;  // 8KB row buffer
  uint64_t now = 0;
  uint64_t last_line = 0;
  for (size_t i = 0; i < profile.length; ++i) {
    double u = rng.next_unit();
    uint64_t gap = static_cast<uint64_t>(-std::log(1.0 - u) / profile.arrival_rate);
    now += gap;
    bool is_write = rng.next_unit() >= profile.read_fraction;
    uint64_t line;
    if (i > 0 && rng.next_bernoulli(profile.locality)) {
      uint64_t row_base = last_line - (last_line % lines_per_row);
      uint64_t span = std::min<uint64_t>(lines_per_row, lines - std::min(row_base, lines - 1));
      line = row_base + rng.next_below(static_cast<uint32_t>(std::max<uint64_t>(1, span)));
    } else {
      line = (static_cast<uint64_t>(rng.next_u64()) % lines);
    }
    last_line = line;
    out.push_back({now, is_write, line * 64});
  }
  return out;
}

}  // namespace screme::timing
