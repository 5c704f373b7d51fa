#include "screme/fault_model.hpp"

#include <stdexcept>

namespace screme::fault {

std::vector<FaultKind> parse_scenario_label(std::string_view label) {
  std::vector<FaultKind> kinds;
  size_t start = 0;
  while (start <= label.size()) {
    size_t plus = label.find('+', start);
    std::string_view tok = label.substr(start, plus == std::string_view::npos ? label.size() - start
                                                                              : plus - start);
    if (tok == "SBF")
      kinds.push_back(FaultKind::SingleBit);
    else if (tok == "DBF")
      kinds.push_back(FaultKind::DoubleBit);
    else if (tok == "SCF")
      kinds.push_back(FaultKind::WholeChip);
    else
      throw std::invalid_argument("unknown fault scenario token: '" + std::string(tok) + "'");
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  if (kinds.empty()) throw std::invalid_argument("empty fault scenario label");
  if (kinds.size() > TransferBlock::kFaultableChips)
    throw std::invalid_argument("scenario has more faults than chips");
  return kinds;
}

std::string scenario_label(const std::vector<FaultKind>& kinds) {
  std::string out;
  for (FaultKind k : kinds) {
    if (!out.empty()) out += '+';
    switch (k) {
      case FaultKind::SingleBit: out += "SBF"; break;
      case FaultKind::DoubleBit: out += "DBF"; break;
      case FaultKind::WholeChip: out += "SCF"; break;
    }
  }
  return out;
}

const std::vector<std::string>& standard_scenarios() {
  static const std::vector<std::string> rows = {
      "SBF",     "SBF+SBF", "DBF",         "SCF",     "SBF+SBF+SBF",
      "DBF+DBF", "DBF+DBF+DBF", "SBF+SCF", "DBF+SCF", "SCF+SCF",
  };
  return rows;
}

namespace {

uint64_t sample_scf_mask(Rng& rng, ScfSampling scf) {
  if (scf == ScfSampling::ExactNonzeroSymbols) {
    uint64_t mask = 0;
    for (int w = 0; w < TransferBlock::kCodewords; ++w)
      mask |= static_cast<uint64_t>(1 + rng.next_below(255)) << (8 * w);
    return mask;
  }
  uint64_t mask = 0;
  do {
    mask = 0;
    for (int w = 0; w < TransferBlock::kCodewords; ++w)
      mask |= static_cast<uint64_t>(rng.next_below(256)) << (8 * w);
  } while (mask == 0);
  return mask;
}

}  // namespace

FaultScenario sample_scenario(const std::vector<FaultKind>& kinds, Rng& rng, ScfSampling scf) {
  FaultScenario sc;
  uint32_t used = 0;
  for (FaultKind kind : kinds) {
    int chip;
    do {
      chip = static_cast<int>(rng.next_below(TransferBlock::kFaultableChips));
    } while (used & (1u << chip));
    used |= 1u << chip;

    uint64_t mask = 0;
    switch (kind) {
      case FaultKind::SingleBit:
        mask = 1ULL << rng.next_below(64);
        break;
      case FaultKind::DoubleBit: {
        int a = static_cast<int>(rng.next_below(64));
        int b;
        do {
          b = static_cast<int>(rng.next_below(64));
        } while (b == a);
        mask = (1ULL << a) | (1ULL << b);
        break;
      }
      case FaultKind::WholeChip:
        mask = sample_scf_mask(rng, scf);
        break;
    }
    sc.faults.push_back({kind, chip, mask});
  }
  return sc;
}

TransferBlock TransferBlock::encode_random(Rng& rng, const rs::EvalPoints& pts, int num_checks) {
  std::array<uint64_t, rs::kDataSymbols> data;
  for (auto& s : data) s = rng.next_u64();
  return encode_slices(data, pts, num_checks);
}

TransferBlock TransferBlock::encode_slices(const std::array<uint64_t, rs::kDataSymbols>& data,
                                           const rs::EvalPoints& pts, int num_checks) {
  TransferBlock b;
  b.num_checks = num_checks;
  for (int c = 0; c < rs::kDataSymbols; ++c) b.slices[c] = data[c];
  for (int w = 0; w < kCodewords; ++w) {
    std::array<rs::FieldElement, rs::kDataSymbols> symbols;
    for (int c = 0; c < rs::kDataSymbols; ++c)
      symbols[c] = rs::FieldElement(static_cast<uint8_t>(data[c] >> (8 * w)));
    rs::Codeword cw = rs::encode(symbols, pts, num_checks);
    for (int k = 0; k < num_checks; ++k)
      b.slices[rs::kDataSymbols + k] |= static_cast<uint64_t>(cw.checks[k].value()) << (8 * w);
  }
  return b;
}

rs::Codeword TransferBlock::codeword(int w) const {
  rs::Codeword cw;
  cw.num_checks = num_checks;
  for (int c = 0; c < rs::kDataSymbols; ++c)
    cw.data[c] = rs::FieldElement(static_cast<uint8_t>(slices[c] >> (8 * w)));
  for (int k = 0; k < num_checks; ++k)
    cw.checks[k] = rs::FieldElement(static_cast<uint8_t>(slices[rs::kDataSymbols + k] >> (8 * w)));
  return cw;
}

std::array<uint64_t, rs::kDataSymbols> TransferBlock::data_slices() const {
  std::array<uint64_t, rs::kDataSymbols> out;
  for (int c = 0; c < rs::kDataSymbols; ++c) out[c] = slices[c];
  return out;
}

void TransferBlock::apply(const FaultScenario& scenario) {
  for (const auto& f : scenario.faults) xor_chip(f.chip, f.mask);
}

}  // namespace screme::fault
