#include "screme/lifetime_mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace screme::lifetime {

using coverage::BlockOutcome;
using fault::FaultKind;

const char* lifetime_scheme_name(LifetimeScheme s) {
  switch (s) {
    case LifetimeScheme::ChipKill: return "chipkill";
    case LifetimeScheme::EnhancedChipKill: return "enhanced-chipkill";
    case LifetimeScheme::ScremeFramework: return "screme-framework";
    case LifetimeScheme::ScremeFrameworkEnhanced: return "screme-framework-enhanced";
  }
  return "?";
}

std::optional<LifetimeScheme> lifetime_scheme_from_name(std::string_view name) {
  for (LifetimeScheme s : all_lifetime_schemes())
    if (name == lifetime_scheme_name(s)) return s;
  return std::nullopt;
}

const std::vector<LifetimeScheme>& all_lifetime_schemes() {
  static const std::vector<LifetimeScheme> v = {
      LifetimeScheme::ChipKill, LifetimeScheme::EnhancedChipKill, LifetimeScheme::ScremeFramework,
      LifetimeScheme::ScremeFrameworkEnhanced};
  return v;
}

namespace {

struct FaultEvent {
  double t_hours;
  int chip;
  FaultKind kind;
};

struct ChipState {
  uint64_t mask = 0;
  int events = 0;
  bool whole_chip = false;
};

// Decode the representative transfer block carrying every accumulated fault.
BlockOutcome classify_state(const std::vector<ChipState>& chips,
                            const fault::TransferBlock& clean,
                            const std::array<uint64_t, rs::kDataSymbols>& original,
                            const rs::EvalPoints& pts) {
  fault::TransferBlock block = clean;
  for (size_t c = 0; c < chips.size(); ++c)
    if (chips[c].mask) block.xor_chip(static_cast<int>(c), chips[c].mask);
  coverage::BlockDecode d;
  for (int w = 0; w < fault::TransferBlock::kCodewords; ++w)
    d.results[w] = rs::decode_ssc(block.codeword(w), pts);
  return coverage::classify(original, d);
}

uint64_t sample_mask(FaultKind kind, Rng& rng) {
  switch (kind) {
    case FaultKind::SingleBit:
      return 1ULL << rng.next_below(64);
    case FaultKind::DoubleBit: {
      int a = static_cast<int>(rng.next_below(64));
      int b;
      do {
        b = static_cast<int>(rng.next_below(64));
      } while (b == a);
      return (1ULL << a) | (1ULL << b);
    }
    case FaultKind::WholeChip: {
      uint64_t m = 0;
      for (int w = 0; w < 8; ++w) m |= static_cast<uint64_t>(1 + rng.next_below(255)) << (8 * w);
      return m;
    }
  }
  return 0;
}

}  // namespace

LifetimeCurve run_lifetime(const LifetimeConfig& cfg, uint64_t trials, uint64_t master_seed) {
  if (trials == 0) throw std::invalid_argument("lifetime: trials must be >= 1");
  if (cfg.time_samples < 1) throw std::invalid_argument("lifetime: time_samples must be >= 1");
  if (cfg.fit_sbf < 0 || cfg.fit_dbf < 0 || cfg.fit_scf < 0)
    throw std::invalid_argument("lifetime: FIT rates must be nonnegative");
  if (cfg.chips < 2 || cfg.chips > fault::TransferBlock::kFaultableChips)
    throw std::invalid_argument("lifetime: chips must be in [2,10]");

  const bool enhanced = cfg.scheme == LifetimeScheme::EnhancedChipKill ||
                        cfg.scheme == LifetimeScheme::ScremeFrameworkEnhanced;
  const bool retiring = cfg.scheme == LifetimeScheme::ScremeFramework ||
                        cfg.scheme == LifetimeScheme::ScremeFrameworkEnhanced;
  const rs::EvalPoints pts = rs::EvalPoints::standard();
  const double per_hour[3] = {cfg.fit_sbf * 1e-9 * cfg.fit_multiplier,
                              cfg.fit_dbf * 1e-9 * cfg.fit_multiplier,
                              cfg.fit_scf * 1e-9 * cfg.fit_multiplier};
  const FaultKind kinds[3] = {FaultKind::SingleBit, FaultKind::DoubleBit, FaultKind::WholeChip};

  std::vector<uint64_t> due_by_sample(cfg.time_samples, 0), sdc_by_sample(cfg.time_samples, 0);

  for (uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng(Rng::derive(master_seed, {trial}));
    // Separate stream for the enhanced-codeword coin so the fault history is
    // identical across schemes at the same master seed.
    Rng demote_rng(Rng::derive(master_seed, {trial, 0xE0ull}));
    fault::TransferBlock clean = fault::TransferBlock::encode_random(rng, pts, 2);
    const auto original = clean.data_slices();

    std::vector<FaultEvent> events;
    for (int c = 0; c < cfg.chips; ++c) {
      for (int k = 0; k < 3; ++k) {
        int n = poisson(rng, per_hour[k] * cfg.mission_hours);
        for (int i = 0; i < n; ++i)
          events.push_back({rng.next_unit() * cfg.mission_hours, c, kinds[k]});
      }
    }
    std::sort(events.begin(), events.end(), [](const FaultEvent& a, const FaultEvent& b) {
      if (a.t_hours != b.t_hours) return a.t_hours < b.t_hours;
      if (a.chip != b.chip) return a.chip < b.chip;
      return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    for (int c = 0; c < cfg.pre_failed_chips && c < cfg.chips; ++c)
      events.insert(events.begin(), {0.0, c, FaultKind::WholeChip});

    std::vector<ChipState> chips(static_cast<size_t>(cfg.chips));
    int spares_left = cfg.spare_chips;
    double due_time = -1, sdc_time = -1;

    for (const FaultEvent& ev : events) {
      ChipState& ch = chips[static_cast<size_t>(ev.chip)];
      ch.mask |= sample_mask(ev.kind, rng);
      ch.events += 1;
      if (ev.kind == FaultKind::WholeChip) ch.whole_chip = true;

      if (retiring && spares_left > 0 &&
          (ch.whole_chip || ch.events >= cfg.retire_threshold)) {
        // Corrected-error counting reached the replacement threshold: the
        // chip is swapped for a spare and its fault state clears.
        ch = ChipState{};
        --spares_left;
        continue;
      }

      BlockOutcome out = classify_state(chips, clean, original, pts);
      if (out == BlockOutcome::Sdc && enhanced && demote_rng.next_bernoulli(0.5))
        out = BlockOutcome::Due;  // the doubled codeword catches half the escapes
      if (out == BlockOutcome::Due && due_time < 0) due_time = ev.t_hours;
      if (out == BlockOutcome::Sdc && sdc_time < 0) sdc_time = ev.t_hours;
      if (due_time >= 0 && sdc_time >= 0) break;
    }

    for (int s = 0; s < cfg.time_samples; ++s) {
      double t = cfg.mission_hours * static_cast<double>(s + 1) /
                 static_cast<double>(cfg.time_samples);
      if (due_time >= 0 && due_time <= t) ++due_by_sample[s];
      if (sdc_time >= 0 && sdc_time <= t) ++sdc_by_sample[s];
    }
  }

  LifetimeCurve curve;
  for (int s = 0; s < cfg.time_samples; ++s) {
    CurvePoint p;
    p.t_hours =
        cfg.mission_hours * static_cast<double>(s + 1) / static_cast<double>(cfg.time_samples);
    p.due_prob = static_cast<double>(due_by_sample[s]) / static_cast<double>(trials);
    p.sdc_prob = static_cast<double>(sdc_by_sample[s]) / static_cast<double>(trials);
    double se_due = std::sqrt(p.due_prob * (1 - p.due_prob) / static_cast<double>(trials));
    double se_sdc = std::sqrt(p.sdc_prob * (1 - p.sdc_prob) / static_cast<double>(trials));
    p.stderr_prob = std::max(se_due, se_sdc);
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace screme::lifetime
