#pragma once

#include <bit>
#include <cstdint>

namespace screme::ondie {

// Per-chip SEC code over one 64-bit cacheline slice, Hamming(71,64) layout:
// stored positions 1..71, parity bits at the seven powers of two, payload at
// the rest. Syndrome of a single flipped bit is its position.

struct ChipSlice {
  uint64_t bits = 0;   // payload
  uint8_t check = 0;   // 7 parity bits, bit k <-> position 2^k
};

enum class OnDieOutcome { Clean, CorrectedSingle, FlaggedErasure };

struct DecodeOutput {
  uint64_t payload = 0;
  OnDieOutcome outcome = OnDieOutcome::Clean;
};

namespace detail {

constexpr bool is_pow2(unsigned x) { return x != 0 && (x & (x - 1)) == 0; }

// position of payload bit i (skipping parity positions)
constexpr uint8_t payload_position(int i) {
  int seen = 0;
  for (unsigned pos = 1; pos <= 71; ++pos) {
    if (is_pow2(pos)) continue;
    if (seen == i) return static_cast<uint8_t>(pos);
    ++seen;
  }
  return 0;
}

struct PosTable {
  uint8_t pos_of_bit[64]{};
  int8_t bit_of_pos[72]{};
};

constexpr PosTable build_pos_table() {
  PosTable t{};
  for (int i = 0; i < 72; ++i) t.bit_of_pos[i] = -1;
  for (int i = 0; i < 64; ++i) {
    t.pos_of_bit[i] = payload_position(i);
    t.bit_of_pos[t.pos_of_bit[i]] = static_cast<int8_t>(i);
  }
  return t;
}

inline constexpr PosTable kPos = build_pos_table();

constexpr uint8_t payload_syndrome(uint64_t bits) {
  uint8_t syn = 0;
  while (bits) {
    int i = std::countr_zero(bits);
    bits &= bits - 1;
    syn ^= kPos.pos_of_bit[i];
  }
  return syn;
}

}  // namespace detail

inline ChipSlice encode(uint64_t payload) {
  return {payload, detail::payload_syndrome(payload)};
}

inline DecodeOutput decode(const ChipSlice& s) {
  uint8_t syn = static_cast<uint8_t>(detail::payload_syndrome(s.bits) ^ s.check);
  if (syn == 0) return {s.bits, OnDieOutcome::Clean};
  if (syn <= 71) {
    if (detail::is_pow2(syn)) return {s.bits, OnDieOutcome::CorrectedSingle};
    return {s.bits ^ (1ULL << detail::kPos.bit_of_pos[syn]), OnDieOutcome::CorrectedSingle};
  }
  return {s.bits, OnDieOutcome::FlaggedErasure};
}

// Fault-severity marker model: the decode outcome is pinned by the injected
// fault, not by syndrome arithmetic. A whole-chip fault or >=2 fault bits is
// always flagged; exactly one fault bit is always corrected.
inline OnDieOutcome marker_outcome(uint64_t injected_mask, bool whole_chip_fault) {
  if (whole_chip_fault) return OnDieOutcome::FlaggedErasure;
  int n = std::popcount(injected_mask);
  if (n == 0) return OnDieOutcome::Clean;
  if (n == 1) return OnDieOutcome::CorrectedSingle;
  return OnDieOutcome::FlaggedErasure;
}

}  // namespace screme::ondie
