#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace screme::dimm {

inline constexpr int kRows = 4;
inline constexpr int kCols = 10;
inline constexpr int kChannelBits = 40;
inline constexpr int kBanksPerRow = 32;  // 8 bank groups x 4 banks

enum class ChipRole { Data, Ecc, WriteOnlyEcc, Spare, Retired };
enum class Mode { Baseline, WriteOnly, IoCol, IoRow, FrameworkReplace, FrameworkScalableEcc };

const char* role_name(ChipRole r);
const char* mode_name(Mode m);

struct Chip {
  ChipRole role = ChipRole::Data;
  int io_width = 4;  // channel bits driven by this chip
  double speed_ratio = 1.0;
  bool on_read_path = true;
};

struct SpareChip {
  double capacity = 0.5;  // fraction of a regular chip
  double speed_ratio = 0.5;
  bool active = false;
  int io_width = 0;
};

struct DimmTopology {
  std::array<std::array<Chip, kCols>, kRows> chips{};
  std::array<std::array<bool, 4>, kCols> wire_ok{};  // 4 data wires per column (2 pairs)
  std::array<bool, kRows> control_wire_ok{};
  std::vector<SpareChip> spare_pool;
  Mode mode = Mode::Baseline;
  int num_checks = 2;
  int data_buffer_latency = 4;
  std::vector<int> ecc_split_widths;  // nonempty when the p1 slot is shared by several slow chips

  static DimmTopology baseline();

  int healthy_wire_bits(int col) const;
  int failed_pair_count() const;
  double active_spare_capacity() const;
  double inactive_spare_capacity() const;
};

struct Violation {
  std::string invariant;
  std::string where;
};

std::vector<Violation> validate(const DimmTopology& t);

// Device-level failure events.
struct SingleChipFailure {
  int row, col;
};
struct DataWirePairFailure {
  int col, pair;  // pair 0 = bits 0..1, pair 1 = bits 2..3
};
struct ControlWireFailure {
  int row;
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Rank plans: a logical rank is a set of (row, bank range) members, each
// driving one enabled half of the column wires.
struct RankMember {
  int row;
  int bank_lo, bank_hi;  // inclusive
  char io_half;          // 'L' / 'R', or 'A' for a row running alone at half width
};
struct LogicalRank {
  std::vector<RankMember> members;
  double burst_scale = 1.0;  // 2.0 when the rank runs at half channel width
};
struct RankPlan {
  std::vector<LogicalRank> ranks;
};

std::vector<Violation> validate(const RankPlan& plan);

RankPlan identity_plan();
// Naive fallback after one row dies: the widowed partner row keeps running
// alone at half width, the intact pair is untouched.
RankPlan half_rank_plan(int failed_row);

// Slow write-only ECC column (the p1 column drops off the read path).
DimmTopology apply_screme_wo(DimmTopology t, double speed_ratio = 0.5,
                             std::span<const int> split_widths = {});

// Column-wise wire-failure tolerance: the hit data column swaps roles with
// the last readable ECC column and keeps updating parity at x2.
DimmTopology apply_io_col(DimmTopology t, DataWirePairFailure ev);

// Row-wise control-failure tolerance: surviving rows regroup into logical
// ranks of full channel width.
struct IoRowResult {
  DimmTopology topology;
  RankPlan plan;
};
IoRowResult apply_io_row(DimmTopology t, ControlWireFailure ev);

// Framework chip-replacement mode: retire the failed chip onto spares.
DimmTopology apply_framework(DimmTopology t, SingleChipFailure ev);
// Framework scalable-ECC mode: spares take a third check symbol (DSD-SSC).
DimmTopology apply_framework_scalable(DimmTopology t);

std::string to_text(const DimmTopology& t);
std::string to_text(const RankPlan& p);
std::string to_json(const DimmTopology& t);
DimmTopology topology_from_json(const std::string& text);

}  // namespace screme::dimm
