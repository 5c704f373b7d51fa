#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "screme/coverage_mc.hpp"

namespace screme::lifetime {

enum class LifetimeScheme {
  ChipKill,
  EnhancedChipKill,
  ScremeFramework,
  ScremeFrameworkEnhanced,
};

const char* lifetime_scheme_name(LifetimeScheme s);
std::optional<LifetimeScheme> lifetime_scheme_from_name(std::string_view name);
const std::vector<LifetimeScheme>& all_lifetime_schemes();

// FIT rates are per chip, faults per 1e9 device-hours. Defaults have no
// published source; absolute probabilities are configuration-dependent and
// only orderings are contractual.
struct LifetimeConfig {
  int chips = 10;
  double fit_sbf = 1500.0;
  double fit_dbf = 60.0;
  double fit_scf = 25.0;
  double mission_hours = 87600.0;  // 10 years
  int time_samples = 24;
  LifetimeScheme scheme = LifetimeScheme::ChipKill;
  double fit_multiplier = 1.0;
  int pre_failed_chips = 0;
  int spare_chips = 2;        // whole-chip replacements available to SCREME
  int retire_threshold = 3;   // fault events on one chip before it is retired
};

struct CurvePoint {
  double t_hours = 0;
  double due_prob = 0;
  double sdc_prob = 0;
  double stderr_prob = 0;  // max of the two binomial standard errors
};

struct LifetimeCurve {
  std::vector<CurvePoint> points;
};

LifetimeCurve run_lifetime(const LifetimeConfig& config, uint64_t trials, uint64_t master_seed);

}  // namespace screme::lifetime
