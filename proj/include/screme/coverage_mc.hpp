#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "screme/fault_model.hpp"
#include "screme/ondie_ecc.hpp"
#include "screme/rs_codec.hpp"

namespace screme::coverage {

enum class Scheme {
  ChipKillOnly,
  DecoupledDetectPhase,
  DecoupledCorrectPhase,
  ChipKillWithOnDie,
  Dddc,
  ScremeFramework,
};

const char* scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(std::string_view name);
const std::vector<Scheme>& all_schemes();

enum class BlockOutcome { Dce, Due, Sdc };

enum class OnDieModel { Marker, Physical };

struct Options {
  fault::ScfSampling scf_sampling = fault::ScfSampling::ExactNonzeroSymbols;
  OnDieModel on_die = OnDieModel::Marker;
  int screme_spare_replacements = 2;
  rs::EvalPoints points = rs::EvalPoints::standard();
};

// Per-codeword verdicts plus the delivered data, as handed to classify().
struct BlockDecode {
  std::array<rs::DecodeResult, fault::TransferBlock::kCodewords> results;
};

// SDC takes precedence: silent corruption in any delivered (non-flagged)
// codeword is SDC even when another codeword raised a DUE.
BlockOutcome classify(const std::array<uint64_t, rs::kDataSymbols>& original_data,
                      const BlockDecode& decode);

// One full trial: random clean block, sampled scenario, scheme decode.
// Consumes rng only for block content and scenario sampling, so different
// schemes see identical trials at the same seed.
BlockOutcome run_trial(const std::vector<fault::FaultKind>& kinds, Scheme scheme, Rng& rng,
                       const Options& opt);

struct RowResult {
  std::string scenario;
  Scheme scheme;
  uint64_t trials = 0;
  uint64_t dce = 0, due = 0, sdc = 0;
  double dce_pct() const { return 100.0 * static_cast<double>(dce) / static_cast<double>(trials); }
  double due_pct() const { return 100.0 * static_cast<double>(due) / static_cast<double>(trials); }
  double sdc_pct() const { return 100.0 * static_cast<double>(sdc) / static_cast<double>(trials); }
  double stderr_pct() const;  // largest binomial standard error of the three
};

RowResult run_coverage(std::string_view scenario, Scheme scheme, uint64_t trials,
                       uint64_t master_seed, const Options& opt = {});

}  // namespace screme::coverage
