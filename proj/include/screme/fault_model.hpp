#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "screme/rng.hpp"
#include "screme/rs_codec.hpp"

namespace screme::fault {

// Fault classes injected per chip: single bit, double bit, whole chip.
enum class FaultKind { SingleBit, DoubleBit, WholeChip };

struct FaultDescriptor {
  FaultKind kind;
  int chip;
  uint64_t mask;  // XORed into the chip's 64-bit slice
};

struct FaultScenario {
  std::vector<FaultDescriptor> faults;
};

enum class ScfSampling {
  ExactNonzeroSymbols,  // every symbol of the chip error is nonzero
  UniformMayBeZero,     // symbols uniform over 0..255, whole mask resampled if zero
};

// Scenario labels are the fault-class names joined with '+', e.g. "SBF+SCF".
// Throws std::invalid_argument on an unknown token.
std::vector<FaultKind> parse_scenario_label(std::string_view label);
std::string scenario_label(const std::vector<FaultKind>& kinds);

// The ten stock scenario rows, in report order.
const std::vector<std::string>& standard_scenarios();

// Chips drawn uniformly without replacement from the 10 externally visible
// chips (8 data + p0 + p1); bit positions uniform within the 64-bit slice.
FaultScenario sample_scenario(const std::vector<FaultKind>& kinds, Rng& rng,
                              ScfSampling scf = ScfSampling::ExactNonzeroSymbols);

// One 64-byte transfer: 8 codewords of 8-bit symbols across 10 (or 11) chip
// columns. Chip c's symbol in codeword w sits at bits [8w, 8w+8) of slice c.
struct TransferBlock {
  static constexpr int kCodewords = 8;
  static constexpr int kFaultableChips = 10;

  std::array<uint64_t, rs::kMaxSymbols> slices{};
  int num_checks = 2;

  int num_chips() const { return rs::kDataSymbols + num_checks; }

  static TransferBlock encode_random(Rng& rng, const rs::EvalPoints& pts, int num_checks);
  static TransferBlock encode_slices(const std::array<uint64_t, rs::kDataSymbols>& data,
                                     const rs::EvalPoints& pts, int num_checks);

  rs::Codeword codeword(int w) const;
  std::array<uint64_t, rs::kDataSymbols> data_slices() const;

  void xor_chip(int chip, uint64_t mask) { slices[static_cast<size_t>(chip)] ^= mask; }
  void apply(const FaultScenario& scenario);
};

}  // namespace screme::fault
