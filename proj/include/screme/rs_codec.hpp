#pragma once

#include <array>
#include <span>

#include "screme/gf256.hpp"

namespace screme::rs {

using gf::FieldElement;

inline constexpr int kDataSymbols = 8;
inline constexpr int kMaxChecks = 3;
inline constexpr int kMaxSymbols = kDataSymbols + kMaxChecks;

// Symbol positions within a codeword: 0..7 data chips, 8 = p0, 9 = p1, 10 = p2.
inline constexpr int kP0 = 8;
inline constexpr int kP1 = 9;
inline constexpr int kP2 = 10;

// Evaluation points of the check equations, p_k = sum_i a_i * x_k^i.
// Default x_k = beta^(k+1) with beta = alpha^8. Single-bit symbol errors are
// themselves powers of alpha (2^b = alpha^b, b < 8), so with beta = alpha^8
// two bit errors on different chips can never cancel a syndrome term; x0 =
// alpha would let any adjacent-chip bit pair slip through detection.
struct EvalPoints {
  FieldElement x0, x1, x2;

  static constexpr EvalPoints standard() {
    return {gf::alpha_pow(8), gf::alpha_pow(16), gf::alpha_pow(24)};
  }

  constexpr FieldElement at(int k) const { return k == 0 ? x0 : (k == 1 ? x1 : x2); }

  // Coefficient of an error at symbol position `pos` in syndrome S_k.
  FieldElement locator(int k, int pos) const {
    if (pos < kDataSymbols) return gf::pow(at(k), pos);
    return FieldElement(pos - kDataSymbols == k ? 1 : 0);
  }
};

struct Codeword {
  std::array<FieldElement, kDataSymbols> data{};
  std::array<FieldElement, kMaxChecks> checks{};
  int num_checks = 2;

  int size() const { return kDataSymbols + num_checks; }

  FieldElement symbol(int pos) const {
    return pos < kDataSymbols ? data[pos] : checks[pos - kDataSymbols];
  }
  void set_symbol(int pos, FieldElement v) {
    if (pos < kDataSymbols)
      data[pos] = v;
    else
      checks[pos - kDataSymbols] = v;
  }
  void add_error(int pos, FieldElement e) { set_symbol(pos, symbol(pos) + e); }
};

enum class DecodeKind { Clean, Corrected, Uncorrectable };

struct DecodeResult {
  DecodeKind kind = DecodeKind::Clean;
  int chip = -1;            // position of the (first) repaired symbol
  FieldElement magnitude{}; // its error value
  std::array<FieldElement, kDataSymbols> delivered{};  // data handed upstream

  bool corrupted_data(const std::array<FieldElement, kDataSymbols>& original) const {
    return delivered != original;
  }
};

enum class DetectOutcome { Pass, Flag };

Codeword encode(const std::array<FieldElement, kDataSymbols>& data, const EvalPoints& pts,
                int num_checks);

// S_k over all positions present in `received`.
std::array<FieldElement, kMaxChecks> syndromes(const Codeword& received, const EvalPoints& pts);

// Single-symbol-correct decode, 2 check symbols.
DecodeResult decode_ssc(const Codeword& received, const EvalPoints& pts);

// Detection from data symbols and p0 only; never touches p1.
DetectOutcome detect_phase(const Codeword& received, const EvalPoints& pts);

// Pass -> Clean without consulting p1; Flag -> full decode_ssc.
DecodeResult decode_decoupled(const Codeword& received, const EvalPoints& pts);

// Erasure (and erasure+error for 3 checks) decode. Capability: 1 erasure with
// 2 checks; with 3 checks up to 2 erasures plus consistency check, 3 erasures
// assuming no further error, or 1 erasure + 1 unknown error.
DecodeResult decode_with_erasures(const Codeword& received, const EvalPoints& pts,
                                  std::span<const int> erased_chips);

// Double-symbol-detect / single-symbol-correct, 3 check symbols.
DecodeResult decode_dsd_ssc(const Codeword& received, const EvalPoints& pts);

}  // namespace screme::rs
