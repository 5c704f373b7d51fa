#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "screme/dimm_topology.hpp"
#include "screme/rng.hpp"

namespace screme::timing {

// All values in memory-controller cycles: 1 cycle = 2 beats, so a 16-beat
// burst spans 8 cycles. CL/nRCD/nRP/nRAS and the CCD family follow the
// DDR5-6400 configuration; the turnaround and drain knobs have no published
// source and are exposed for configuration.
struct TimingParams {
  int cl = 44;
  int n_rcd = 44;
  int n_rp = 44;
  int n_ras = 81;
  int n_ccd_s = 8;
  int n_ccd_l = 16;
  int n_ccd_l_wr = 64;
  int t_burst = 8;
  int write_queue_capacity = 32;
  int read_queue_capacity = 64;
  int data_buffer_latency = 4;
  int t_wr = 48;
  int t_wtr_s = 4;
  int t_wtr_l = 16;
  int t_rtw = 8;
  int wq_drain_high = 28;
  int wq_drain_low = 8;
  int parity_buffer_entries = 32;  // one 8B parity slot per write-queue entry
  int access_granularity = 1;      // 2 models a ganged (lockstep) channel pair
};

struct MemRequest {
  uint64_t arrival = 0;
  bool is_write = false;
  uint64_t addr = 0;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(const std::string& what, int line) : std::runtime_error(what), line_no(line) {}
  int line_no;
};

// Line format: "<arrival_cycle> <R|W> <hex_address>"; '#' starts a comment.
std::vector<MemRequest> parse_trace(std::istream& in);
std::vector<MemRequest> load_trace(const std::string& path);
void write_trace(std::ostream& out, std::span<const MemRequest> trace);

struct TraceProfile {
  double read_fraction = 0.67;
  double locality = 0.6;              // probability the next access stays in the last row
  uint64_t footprint_bytes = 1ull << 26;
  double arrival_rate = 0.08;         // requests per cycle
  size_t length = 100000;
};

std::vector<MemRequest> generate_trace(const TraceProfile& profile, uint64_t seed);

// One write/read alternation on the bus. t1 = regular write-burst end,
// t1_prime = slow-lane parity completion, t2 = read-frame end.
struct FrameRecord {
  uint64_t frame_start = 0;
  uint64_t t1 = 0;
  uint64_t t1_prime = 0;
  uint64_t t2 = 0;
};

struct SimReport {
  uint64_t total_cycles = 0;
  uint64_t reads = 0;
  uint64_t writes = 0;
  double avg_read_latency = 0.0;
  uint64_t min_read_latency = 0;
  uint64_t max_read_latency = 0;
  double throughput_rpkc = 0.0;  // retired requests per kilocycle
  double ecc_lane_utilization = 0.0;
  uint64_t slow_stall_cycles = 0;
  uint64_t flagged_reads = 0;
  uint64_t max_write_queue_depth = 0;
  std::vector<FrameRecord> frames;

  double slowdown_vs(const SimReport& reference) const {
    return static_cast<double>(total_cycles) / static_cast<double>(reference.total_cycles);
  }
};

SimReport simulate(std::span<const MemRequest> trace, const TimingParams& params,
                   const dimm::DimmTopology& topology, const dimm::RankPlan& plan);

// Decoupled correction cost: each read independently flags with
// block_error_rate and pays a dedicated slow-chip parity fetch.
SimReport simulate_with_errors(std::span<const MemRequest> trace, const TimingParams& params,
                               const dimm::DimmTopology& topology, const dimm::RankPlan& plan,
                               double block_error_rate, uint64_t seed);

struct FrameStats {
  size_t count = 0;
  double mean_norm_read_frame = 0.0;  // (t2-t1)/(t1-frame_start)
  double min_norm_read_frame = 0.0;
  double violation_fraction = 0.0;    // fraction below the threshold
};

FrameStats frame_statistics(const SimReport& report, double threshold);

}  // namespace screme::timing
