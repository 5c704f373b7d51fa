#include "screme/dimm_topology.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace screme::dimm {

namespace {
constexpr int kP0Col = 8;
constexpr int kP1Col = 9;

int rank_of_row(int row) { return row / 2; }
int peer_row(int row) { return row ^ 1; }
}  // namespace

const char* role_name(ChipRole r) {
  switch (r) {
    case ChipRole::Data: return "data";
    case ChipRole::Ecc: return "ecc";
    case ChipRole::WriteOnlyEcc: return "write-only-ecc";
    case ChipRole::Spare: return "spare";
    case ChipRole::Retired: return "retired";
  }
  return "?";
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Baseline: return "baseline";
    case Mode::WriteOnly: return "screme-wo";
    case Mode::IoCol: return "screme-io-col";
    case Mode::IoRow: return "screme-io-row";
    case Mode::FrameworkReplace: return "framework-replace";
    case Mode::FrameworkScalableEcc: return "framework-scalable-ecc";
  }
  return "?";
}

DimmTopology DimmTopology::baseline() {
  DimmTopology t;
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      t.chips[r][c].role = c < 8 ? ChipRole::Data : ChipRole::Ecc;
      t.chips[r][c].io_width = 4;
      t.chips[r][c].speed_ratio = 1.0;
      t.chips[r][c].on_read_path = true;
    }
  }
  for (auto& col : t.wire_ok) col.fill(true);
  t.control_wire_ok.fill(true);
  t.spare_pool.assign(4, SpareChip{});  // pool of half-capacity slow chips
  return t;
}

int DimmTopology::healthy_wire_bits(int col) const {
  int n = 0;
  for (bool ok : wire_ok[col]) n += ok;
  return n;
}

int DimmTopology::failed_pair_count() const {
  int n = 0;
  for (int c = 0; c < kCols; ++c) {
    if (!wire_ok[c][0] || !wire_ok[c][1]) ++n;
    if (!wire_ok[c][2] || !wire_ok[c][3]) ++n;
  }
  return n;
}

double DimmTopology::active_spare_capacity() const {
  double s = 0;
  for (const auto& sp : spare_pool)
    if (sp.active) s += sp.capacity;
  return s;
}

double DimmTopology::inactive_spare_capacity() const {
  double s = 0;
  for (const auto& sp : spare_pool)
    if (!sp.active) s += sp.capacity;
  return s;
}

std::vector<Violation> validate(const DimmTopology& t) {
  std::vector<Violation> v;
  auto where = [](int r, int c) {
    return "chip(" + std::to_string(r) + "," + std::to_string(c) + ")";
  };

  int retired = 0;
  for (int r = 0; r < kRows; ++r) {
    if (!t.control_wire_ok[r]) continue;  // dead row is off the module
    int read_bits = 0, reserved_bits = 0;
    for (int c = 0; c < kCols; ++c) {
      const Chip& ch = t.chips[r][c];
      if (ch.role == ChipRole::WriteOnlyEcc && ch.on_read_path)
        v.push_back({"write-only chip on read path", where(r, c)});
      if (ch.io_width > t.healthy_wire_bits(c))
        v.push_back({"io width exceeds healthy wires", where(r, c)});
      if (ch.role == ChipRole::Retired) ++retired;
      bool readable = ch.on_read_path &&
                      (ch.role == ChipRole::Data || ch.role == ChipRole::Ecc);
      if (readable)
        read_bits += ch.io_width;
      else
        reserved_bits += 4;  // whole column budget is off the read path
    }
    if (read_bits + reserved_bits != kChannelBits)
      v.push_back({"rank read width + reserved width != channel width",
                   "row " + std::to_string(r) + " read=" + std::to_string(read_bits) +
                       " reserved=" + std::to_string(reserved_bits)});
  }

  // Each retired chip spans all four rows' worth in the grid cell count; a
  // grid cell is one chip, so capacity units are cells.
  double active = t.active_spare_capacity();
  if (active + 1e-9 < retired)
    v.push_back({"activated spare capacity below retired capacity",
                 "retired=" + std::to_string(retired) + " spare=" + std::to_string(active)});

  if (!t.ecc_split_widths.empty()) {
    int sum = 0;
    for (int w : t.ecc_split_widths) sum += w;
    if (sum != 4)
      v.push_back({"split ECC widths must sum to the column width", "p1 column"});
  }
  return v;
}

std::vector<Violation> validate(const RankPlan& plan) {
  std::vector<Violation> v;
  std::array<std::array<bool, kBanksPerRow>, kRows> used{};
  for (size_t i = 0; i < plan.ranks.size(); ++i) {
    const LogicalRank& rank = plan.ranks[i];
    int width = 0;
    for (const RankMember& m : rank.members) {
      width += 20;  // one enabled x4 half across 10 columns
      for (int b = m.bank_lo; b <= m.bank_hi; ++b) {
        if (used[m.row][b])
          v.push_back({"bank assigned to two logical ranks",
                       "row " + std::to_string(m.row) + " bank " + std::to_string(b)});
        used[m.row][b] = true;
      }
    }
    if (width != kChannelBits)
      v.push_back({"logical rank does not sum to full channel width",
                   "rank " + std::to_string(i) + " width=" + std::to_string(width)});
  }
  return v;
}

RankPlan identity_plan() {
  RankPlan p;
  p.ranks.push_back({{{0, 0, kBanksPerRow - 1, 'L'}, {1, 0, kBanksPerRow - 1, 'R'}}, 1.0});
  p.ranks.push_back({{{2, 0, kBanksPerRow - 1, 'L'}, {3, 0, kBanksPerRow - 1, 'R'}}, 1.0});
  return p;
}

RankPlan half_rank_plan(int failed_row) {
  if (failed_row < 0 || failed_row >= kRows)
    throw std::domain_error("half_rank_plan: row out of range");
  RankPlan p;
  int widow = peer_row(failed_row);
  p.ranks.push_back({{{widow, 0, kBanksPerRow - 1, 'A'}}, 2.0});
  int other = rank_of_row(failed_row) == 0 ? 2 : 0;
  p.ranks.push_back({{{other, 0, kBanksPerRow - 1, 'L'}, {other + 1, 0, kBanksPerRow - 1, 'R'}},
                     1.0});
  return p;
}

DimmTopology apply_screme_wo(DimmTopology t, double speed_ratio, std::span<const int> split_widths) {
  if (speed_ratio <= 0.0 || speed_ratio > 1.0)
    throw std::domain_error("apply_screme_wo: speed ratio must be in (0,1]");
  for (int r = 0; r < kRows; ++r) {
    Chip& ch = t.chips[r][kP1Col];
    ch.role = ChipRole::WriteOnlyEcc;
    ch.speed_ratio = speed_ratio;
    ch.on_read_path = false;
  }
  t.ecc_split_widths.assign(split_widths.begin(), split_widths.end());
  if (!t.ecc_split_widths.empty()) {
    int sum = 0;
    for (int w : t.ecc_split_widths) sum += w;
    if (sum != 4) throw std::domain_error("apply_screme_wo: split widths must sum to 4");
  }
  t.mode = Mode::WriteOnly;
  return t;
}

DimmTopology apply_io_col(DimmTopology t, DataWirePairFailure ev) {
  if (ev.col < 0 || ev.col >= kCols || ev.pair < 0 || ev.pair > 1)
    throw std::domain_error("apply_io_col: event out of range");
  t.wire_ok[ev.col][2 * ev.pair] = false;
  t.wire_ok[ev.col][2 * ev.pair + 1] = false;
  if (t.failed_pair_count() > 2)
    throw InfeasibleError("io-col tolerates at most two failed data wire pairs");
  if (t.healthy_wire_bits(ev.col) == 0)
    throw InfeasibleError("both wire pairs of one column failed; no write path left");

  bool is_data_col = t.chips[0][ev.col].role == ChipRole::Data;
  if (is_data_col) {
    // Swap roles with the last still-readable ECC column.
    int ecc_col = -1;
    for (int c : {kP1Col, kP0Col}) {
      if (t.chips[0][c].role == ChipRole::Ecc && t.chips[0][c].on_read_path) ecc_col = c;
    }
    if (ecc_col < 0) throw InfeasibleError("no readable ECC column left to swap with");
    for (int r = 0; r < kRows; ++r) {
      t.chips[r][ecc_col].role = ChipRole::Data;
      t.chips[r][ecc_col].io_width = 4;
      t.chips[r][ecc_col].on_read_path = true;
    }
  }
  for (int r = 0; r < kRows; ++r) {
    Chip& ch = t.chips[r][ev.col];
    ch.role = ChipRole::WriteOnlyEcc;
    ch.io_width = 2;
    ch.on_read_path = false;
  }
  t.mode = Mode::IoCol;
  return t;
}

IoRowResult apply_io_row(DimmTopology t, ControlWireFailure ev) {
  if (ev.row < 0 || ev.row >= kRows) throw std::domain_error("apply_io_row: row out of range");
  t.control_wire_ok[ev.row] = false;
  t.mode = Mode::IoRow;

  std::vector<int> alive;
  for (int r = 0; r < kRows; ++r)
    if (t.control_wire_ok[r]) alive.push_back(r);

  RankPlan plan;
  const int half = kBanksPerRow / 2;
  switch (alive.size()) {
    case 4:
      plan = identity_plan();
      break;
    case 3: {
      int s0 = alive[0], s1 = alive[1], s2 = alive[2];
      plan.ranks.push_back({{{s0, 0, half - 1, 'L'}, {s1, 0, half - 1, 'R'}}, 1.0});
      plan.ranks.push_back({{{s0, half, kBanksPerRow - 1, 'L'}, {s2, 0, half - 1, 'R'}}, 1.0});
      plan.ranks.push_back(
          {{{s1, half, kBanksPerRow - 1, 'L'}, {s2, half, kBanksPerRow - 1, 'R'}}, 1.0});
      break;
    }
    case 2:
      plan.ranks.push_back(
          {{{alive[0], 0, kBanksPerRow - 1, 'L'}, {alive[1], 0, kBanksPerRow - 1, 'R'}}, 1.0});
      break;
    default:
      throw InfeasibleError("io-row needs at least two surviving rows");
  }
  return {std::move(t), std::move(plan)};
}

namespace {

// Activate inactive spares until `needed` capacity is covered.
void activate_spares(DimmTopology& t, double needed, int io_width) {
  double have = 0;
  for (auto& sp : t.spare_pool) {
    if (have >= needed - 1e-9) break;
    if (sp.active) continue;
    sp.active = true;
    sp.io_width = io_width;
    have += sp.capacity;
  }
  if (have + 1e-9 < needed) {
    std::ostringstream os;
    os << "spare pool short by " << (needed - have) << " chip-equivalents";
    throw InfeasibleError(os.str());
  }
}

}  // namespace

DimmTopology apply_framework(DimmTopology t, SingleChipFailure ev) {
  if (ev.row < 0 || ev.row >= kRows || ev.col < 0 || ev.col >= kCols)
    throw std::domain_error("apply_framework: event out of range");
  if (t.inactive_spare_capacity() + 1e-9 < 1.0)
    throw InfeasibleError("spare pool short by " +
                          std::to_string(1.0 - t.inactive_spare_capacity()) +
                          " chip-equivalents");
  activate_spares(t, 1.0, 2);

  Chip& failed = t.chips[ev.row][ev.col];
  failed.role = ChipRole::Retired;
  failed.io_width = 0;
  failed.on_read_path = false;

  Chip& peer = t.chips[peer_row(ev.row)][ev.col];
  peer.role = ChipRole::WriteOnlyEcc;
  peer.io_width = 2;
  peer.on_read_path = false;

  // The failed column becomes the parity column for the other rank; its
  // former parity duties move to the last ECC column, which turns into data.
  for (int r = 0; r < kRows; ++r) {
    if (rank_of_row(r) != rank_of_row(ev.row)) {
      t.chips[r][ev.col].role = ChipRole::Ecc;
      t.chips[r][ev.col].io_width = 4;
      t.chips[r][ev.col].on_read_path = true;
    }
    if (ev.col != kP1Col) {
      t.chips[r][kP1Col].role = ChipRole::Data;
      t.chips[r][kP1Col].io_width = 4;
      t.chips[r][kP1Col].on_read_path = true;
    }
  }
  t.mode = Mode::FrameworkReplace;
  return t;
}

DimmTopology apply_framework_scalable(DimmTopology t) {
  if (t.inactive_spare_capacity() + 1e-9 < 1.0)
    throw InfeasibleError("spare pool short by " +
                          std::to_string(1.0 - t.inactive_spare_capacity()) +
                          " chip-equivalents");
  activate_spares(t, 1.0, 2);
  for (int r = 0; r < kRows; ++r) {
    Chip& ch = t.chips[r][kP1Col];
    ch.role = ChipRole::WriteOnlyEcc;
    ch.io_width = 2;  // the freed 2 bits go to the spares (p2 lane)
    ch.on_read_path = false;
  }
  t.num_checks = 3;
  t.mode = Mode::FrameworkScalableEcc;
  return t;
}

std::string to_text(const DimmTopology& t) {
  std::ostringstream os;
  os << "mode " << mode_name(t.mode) << ", checks " << t.num_checks << "\n";
  for (int r = 0; r < kRows; ++r) {
    os << "row" << r << (t.control_wire_ok[r] ? "  " : "x ");
    for (int c = 0; c < kCols; ++c) {
      const Chip& ch = t.chips[r][c];
      char tag = '?';
      switch (ch.role) {
        case ChipRole::Data: tag = 'D'; break;
        case ChipRole::Ecc: tag = 'E'; break;
        case ChipRole::WriteOnlyEcc: tag = 'W'; break;
        case ChipRole::Spare: tag = 'S'; break;
        case ChipRole::Retired: tag = '.'; break;
      }
      os << ' ' << tag << ch.io_width;
    }
    os << "\n";
  }
  os << "wires";
  for (int c = 0; c < kCols; ++c) os << ' ' << t.healthy_wire_bits(c);
  os << "\nspares";
  for (const auto& sp : t.spare_pool)
    os << ' ' << (sp.active ? "on" : "off") << '/' << sp.capacity;
  os << "\n";
  return os.str();
}

std::string to_text(const RankPlan& p) {
  std::ostringstream os;
  for (size_t i = 0; i < p.ranks.size(); ++i) {
    os << "rank" << i << " (burst x" << p.ranks[i].burst_scale << "):";
    for (const RankMember& m : p.ranks[i].members)
      os << " row" << m.row << "[banks " << m.bank_lo << "-" << m.bank_hi << "," << m.io_half
         << "]";
    os << "\n";
  }
  return os.str();
}

std::string to_json(const DimmTopology& t) {
  nlohmann::json j;
  j["mode"] = mode_name(t.mode);
  j["num_checks"] = t.num_checks;
  j["data_buffer_latency"] = t.data_buffer_latency;
  j["control_wire_ok"] = t.control_wire_ok;
  j["ecc_split_widths"] = t.ecc_split_widths;
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      const Chip& ch = t.chips[r][c];
      j["chips"].push_back({{"row", r},
                            {"col", c},
                            {"role", role_name(ch.role)},
                            {"io_width", ch.io_width},
                            {"speed_ratio", ch.speed_ratio},
                            {"on_read_path", ch.on_read_path}});
    }
  }
  for (int c = 0; c < kCols; ++c) j["wire_ok"].push_back(t.wire_ok[c]);
  for (const auto& sp : t.spare_pool)
    j["spare_pool"].push_back({{"capacity", sp.capacity},
                               {"speed_ratio", sp.speed_ratio},
                               {"active", sp.active},
                               {"io_width", sp.io_width}});
  return j.dump(2);
}

DimmTopology topology_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  DimmTopology t = DimmTopology::baseline();
  t.num_checks = j.value("num_checks", 2);
  t.data_buffer_latency = j.value("data_buffer_latency", 4);
  std::string mode = j.value("mode", "baseline");
  for (Mode m : {Mode::Baseline, Mode::WriteOnly, Mode::IoCol, Mode::IoRow,
                 Mode::FrameworkReplace, Mode::FrameworkScalableEcc})
    if (mode == mode_name(m)) t.mode = m;
  if (j.contains("control_wire_ok"))
    for (int r = 0; r < kRows; ++r) t.control_wire_ok[r] = j["control_wire_ok"][r];
  if (j.contains("ecc_split_widths"))
    t.ecc_split_widths = j["ecc_split_widths"].get<std::vector<int>>();
  if (j.contains("chips")) {
    for (const auto& cj : j["chips"]) {
      Chip& ch = t.chips[cj["row"].get<int>()][cj["col"].get<int>()];
      std::string role = cj["role"];
      for (ChipRole r : {ChipRole::Data, ChipRole::Ecc, ChipRole::WriteOnlyEcc, ChipRole::Spare,
                         ChipRole::Retired})
        if (role == role_name(r)) ch.role = r;
      ch.io_width = cj["io_width"];
      ch.speed_ratio = cj["speed_ratio"];
      ch.on_read_path = cj["on_read_path"];
    }
  }
  if (j.contains("wire_ok"))
    for (int c = 0; c < kCols; ++c)
      for (int w = 0; w < 4; ++w) t.wire_ok[c][w] = j["wire_ok"][c][w];
  if (j.contains("spare_pool")) {
    t.spare_pool.clear();
    for (const auto& sj : j["spare_pool"])
      t.spare_pool.push_back(
          {sj["capacity"], sj["speed_ratio"], sj["active"], sj["io_width"]});
  }
  return t;
}

}  // namespace screme::dimm
