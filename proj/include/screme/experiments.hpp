#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "screme/config.hpp"

namespace screme::cli {

struct GlobalOpts {
  uint64_t seed = 12345;
  std::string out;             // empty -> auto filename from (subcommand, seed, config hash)
  std::string format = "csv";  // or "json"
  std::optional<uint64_t> trials;
};

// Exit codes: 0 ok, 1 internal, 2 config, 3 trace parse, 4 reconfiguration
// infeasible. The cmd_* functions throw; run() maps exceptions to codes.
int cmd_coverage(const config::Config& cfg, const GlobalOpts& opts);
int cmd_timing(const config::Config& cfg, const GlobalOpts& opts);
int cmd_lifetime(const config::Config& cfg, const GlobalOpts& opts);
int cmd_topology(const config::Config& cfg, const GlobalOpts& opts);

int run(int argc, char** argv);

}  // namespace screme::cli
