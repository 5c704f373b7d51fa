#include "screme/coverage_mc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace screme::coverage {

using fault::FaultDescriptor;
using fault::FaultKind;
using fault::FaultScenario;
using fault::TransferBlock;
using rs::DecodeKind;
using rs::DecodeResult;

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ChipKillOnly: return "chipkill";
    case Scheme::DecoupledDetectPhase: return "decoupled-detect";
    case Scheme::DecoupledCorrectPhase: return "decoupled-correct";
    case Scheme::ChipKillWithOnDie: return "chipkill-ondie";
    case Scheme::Dddc: return "dddc";
    case Scheme::ScremeFramework: return "screme-framework";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(std::string_view name) {
  for (Scheme s : all_schemes())
    if (name == scheme_name(s)) return s;
  return std::nullopt;
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> v = {
      Scheme::ChipKillOnly,       Scheme::DecoupledDetectPhase, Scheme::DecoupledCorrectPhase,
      Scheme::ChipKillWithOnDie, Scheme::Dddc,                 Scheme::ScremeFramework,
  };
  return v;
}

BlockOutcome classify(const std::array<uint64_t, rs::kDataSymbols>& original_data,
                      const BlockDecode& decode) {
  bool silent = false;
  bool flagged = false;
  for (int w = 0; w < TransferBlock::kCodewords; ++w) {
    const DecodeResult& r = decode.results[w];
    if (r.kind == DecodeKind::Uncorrectable) {
      flagged = true;
      continue;
    }
    for (int c = 0; c < rs::kDataSymbols; ++c) {
      if (r.delivered[c].value() != static_cast<uint8_t>(original_data[c] >> (8 * w))) {
        silent = true;
        break;
      }
    }
  }
  if (silent) return BlockOutcome::Sdc;
  if (flagged) return BlockOutcome::Due;
  return BlockOutcome::Dce;
}

namespace {

// On-die stage over a corrupted block: single-bit chips are restored,
// multi-bit / whole-chip faults become erasure hints for the rank decoder.
std::vector<int> on_die_stage(TransferBlock& block, const FaultScenario& scenario,
                              const Options& opt) {
  std::vector<int> erasures;
  for (const FaultDescriptor& f : scenario.faults) {
    if (opt.on_die == OnDieModel::Marker) {
      switch (ondie::marker_outcome(f.mask, f.kind == FaultKind::WholeChip)) {
        case ondie::OnDieOutcome::Clean:
          break;
        case ondie::OnDieOutcome::CorrectedSingle:
          block.xor_chip(f.chip, f.mask);
          break;
        case ondie::OnDieOutcome::FlaggedErasure:
          erasures.push_back(f.chip);
          break;
      }
    } else {
      uint64_t original = block.slices[static_cast<size_t>(f.chip)] ^ f.mask;
      ondie::ChipSlice stored = ondie::encode(original);
      stored.bits ^= f.mask;
      ondie::DecodeOutput out = ondie::decode(stored);
      block.slices[static_cast<size_t>(f.chip)] = out.payload;
      if (out.outcome == ondie::OnDieOutcome::FlaggedErasure) erasures.push_back(f.chip);
    }
  }
  std::sort(erasures.begin(), erasures.end());
  return erasures;
}

BlockDecode decode_plain(const TransferBlock& block, const Options& opt,
                         DecodeResult (*decoder)(const rs::Codeword&, const rs::EvalPoints&)) {
  BlockDecode d;
  for (int w = 0; w < TransferBlock::kCodewords; ++w)
    d.results[w] = decoder(block.codeword(w), opt.points);
  return d;
}

BlockDecode decode_detect_only(const TransferBlock& block, const Options& opt) {
  BlockDecode d;
  for (int w = 0; w < TransferBlock::kCodewords; ++w) {
    rs::Codeword cw = block.codeword(w);
    DecodeResult r;
    r.delivered = cw.data;
    r.kind = rs::detect_phase(cw, opt.points) == rs::DetectOutcome::Flag
                 ? DecodeKind::Uncorrectable
                 : DecodeKind::Clean;
    d.results[w] = r;
  }
  return d;
}

BlockDecode decode_with_erasure_set(const TransferBlock& block, const std::vector<int>& erasures,
                                    const Options& opt) {
  BlockDecode d;
  for (int w = 0; w < TransferBlock::kCodewords; ++w)
    d.results[w] = rs::decode_with_erasures(block.codeword(w), opt.points, erasures);
  return d;
}

// Sequential SCREME flow: faults land one at a time; a flagged chip is
// retired onto a spare (contents reconstructed by erasure decode) while
// spares last, afterwards flagged chips stay as live erasures.
BlockOutcome run_screme_trial(TransferBlock& block,
                              const std::array<uint64_t, rs::kDataSymbols>& original,
                              const FaultScenario& scenario, const Options& opt) {
  int spares_left = opt.screme_spare_replacements;
  std::vector<int> flagged;  // unretired flagged chips, fault still present
  std::vector<FaultDescriptor> live_singles;

  auto visible_block = [&]() {
    TransferBlock v = block;
    for (const FaultDescriptor& s : live_singles) v.xor_chip(s.chip, s.mask);  // on-die corrects
    return v;
  };

  for (const FaultDescriptor& f : scenario.faults) {
    block.xor_chip(f.chip, f.mask);
    ondie::OnDieOutcome o = ondie::marker_outcome(f.mask, f.kind == FaultKind::WholeChip);
    if (o == ondie::OnDieOutcome::CorrectedSingle) {
      live_singles.push_back(f);
      continue;
    }
    if (o != ondie::OnDieOutcome::FlaggedErasure) continue;

    if (spares_left > 0) {
      --spares_left;
      std::vector<int> erasures = flagged;
      erasures.push_back(f.chip);
      std::sort(erasures.begin(), erasures.end());
      TransferBlock v = visible_block();
      bool reconstructed = true;
      for (int w = 0; w < TransferBlock::kCodewords; ++w) {
        if (rs::decode_with_erasures(v.codeword(w), opt.points, erasures).kind ==
            DecodeKind::Uncorrectable) {
          reconstructed = false;
          break;
        }
      }
      // The spare takes over this chip either way; a successful reconstruction
      // migrates the original contents, a failed one migrates the corruption.
      if (reconstructed) block.xor_chip(f.chip, f.mask);
    } else {
      flagged.push_back(f.chip);
    }
  }

  std::sort(flagged.begin(), flagged.end());
  TransferBlock v = visible_block();
  BlockDecode d = decode_with_erasure_set(v, flagged, opt);
  return classify(original, d);
}

}  // namespace

BlockOutcome run_trial(const std::vector<FaultKind>& kinds, Scheme scheme, Rng& rng,
                       const Options& opt) {
  const int checks = scheme == Scheme::Dddc ? 3 : 2;
  TransferBlock block = TransferBlock::encode_random(rng, opt.points, checks);
  const auto original = block.data_slices();
  FaultScenario scenario = fault::sample_scenario(kinds, rng, opt.scf_sampling);

  switch (scheme) {
    case Scheme::ChipKillOnly: {
      block.apply(scenario);
      return classify(original, decode_plain(block, opt, &rs::decode_ssc));
    }
    case Scheme::DecoupledDetectPhase: {
      block.apply(scenario);
      return classify(original, decode_detect_only(block, opt));
    }
    case Scheme::DecoupledCorrectPhase: {
      block.apply(scenario);
      return classify(original, decode_plain(block, opt, &rs::decode_decoupled));
    }
    case Scheme::ChipKillWithOnDie:
    case Scheme::Dddc: {
      block.apply(scenario);
      std::vector<int> erasures = on_die_stage(block, scenario, opt);
      return classify(original, decode_with_erasure_set(block, erasures, opt));
    }
    case Scheme::ScremeFramework:
      return run_screme_trial(block, original, scenario, opt);
  }
  return BlockOutcome::Due;
}

double RowResult::stderr_pct() const {
  double worst = 0.0;
  for (uint64_t k : {dce, due, sdc}) {
    double p = static_cast<double>(k) / static_cast<double>(trials);
    worst = std::max(worst, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)));
  }
  return 100.0 * worst;
}

RowResult run_coverage(std::string_view scenario, Scheme scheme, uint64_t trials,
                       uint64_t master_seed, const Options& opt) {
  if (trials == 0) throw std::invalid_argument("coverage: trials must be >= 1");
  std::vector<FaultKind> kinds = fault::parse_scenario_label(scenario);
  RowResult row;
  row.scenario = std::string(scenario);
  row.scheme = scheme;
  row.trials = trials;
  for (uint64_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(master_seed, {t}));
    switch (run_trial(kinds, scheme, rng, opt)) {
      case BlockOutcome::Dce: ++row.dce; break;
      case BlockOutcome::Due: ++row.due; break;
      case BlockOutcome::Sdc: ++row.sdc; break;
    }
  }
  return row;
}

}  // namespace screme::coverage
