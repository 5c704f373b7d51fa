#include "screme/timing_sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>

namespace screme::timing {

namespace {

struct RankGeometry {
  int banks = 32;
  double burst_scale = 1.0;
};

struct PlanGeometry {
  std::vector<RankGeometry> ranks;
};

PlanGeometry geometry_of(const dimm::RankPlan& plan) {
  PlanGeometry g;
  for (const auto& rank : plan.ranks) {
    RankGeometry rg;
    rg.burst_scale = rank.burst_scale;
    rg.banks = rank.members.empty()
                   ? dimm::kBanksPerRow
                   : rank.members[0].bank_hi - rank.members[0].bank_lo + 1;
    g.ranks.push_back(rg);
  }
  if (g.ranks.empty()) g.ranks.push_back({});
  return g;
}

struct Mapped {
  int rank, bg, bank;
  int64_t row;
};

// line address -> rank (modulo), then bank XOR-folded with row bits.
Mapped map_address(uint64_t addr, const PlanGeometry& g) {
  const uint64_t line = addr >> 6;
  const uint64_t seg = line >> 7;  // 128 lines per row buffer
  const int nranks = static_cast<int>(g.ranks.size());
  Mapped m;
  m.rank = static_cast<int>(seg % nranks);
  uint64_t idx = seg / nranks;
  const int banks = g.ranks[m.rank].banks;
  int64_t row = static_cast<int64_t>(idx / banks);
  int bank = static_cast<int>(idx % banks) ^ static_cast<int>(row & (banks - 1));
  m.bank = bank;
  m.bg = bank >> 2;
  m.row = row;
  return m;
}

struct BankState {
  int64_t open_row = -1;
  uint64_t col_ok_at = 0;
  uint64_t pre_ok_at = 0;
  uint64_t act_ok_at = 0;
};

struct RankState {
  std::vector<BankState> banks;
  std::vector<uint64_t> last_col_bg;
  std::vector<uint64_t> last_wr_col_bg;
  uint64_t last_col_any = 0;
  uint64_t last_write_data_end = 0;
};

struct QueueEntry {
  MemRequest req;
  Mapped loc;
  uint64_t admit = 0;
};

struct SlowLane {
  bool active = false;
  double ratio = 1.0;
  int buffer_latency = 0;
};

SlowLane slow_lane_of(const dimm::DimmTopology& topo) {
  SlowLane lane;
  double ratio = 1.0;
  bool write_only_present = false;
  for (int r = 0; r < dimm::kRows; ++r) {
    for (int c = 0; c < dimm::kCols; ++c) {
      const auto& ch = topo.chips[r][c];
      if (ch.role == dimm::ChipRole::WriteOnlyEcc) {
        write_only_present = true;
        ratio = std::min(ratio, ch.speed_ratio);
      }
    }
  }
  for (const auto& sp : topo.spare_pool)
    if (sp.active) ratio = std::min(ratio, sp.speed_ratio);
  // A write-only chip at full channel rate bypasses the modulating buffer;
  // the machine is then indistinguishable from the baseline.
  lane.active = write_only_present && ratio < 1.0;
  lane.ratio = ratio;
  lane.buffer_latency = topo.data_buffer_latency;
  return lane;
}

uint64_t scaled_up(uint64_t cycles, double ratio) {
  return static_cast<uint64_t>(std::ceil(static_cast<double>(cycles) / ratio));
}

class Engine {
 public:
  Engine(std::span<const MemRequest> trace, const TimingParams& p, const PlanGeometry& geom,
         SlowLane lane, double block_error_rate, uint64_t error_seed)
      : trace_(trace), p_(p), geom_(geom), lane_(lane), err_rate_(block_error_rate),
        err_seed_(error_seed) {
    ranks_.resize(geom.ranks.size());
    for (size_t r = 0; r < ranks_.size(); ++r) {
      ranks_[r].banks.resize(geom.ranks[r].banks);
      int bgs = (geom.ranks[r].banks + 3) / 4;
      ranks_[r].last_col_bg.assign(bgs, 0);
      ranks_[r].last_wr_col_bg.assign(bgs, 0);
    }
  }

  SimReport run() {
    while (idx_ < trace_.size() || !readq_.empty() || !writeq_.empty()) {
      admit();
      if (readq_.empty() && writeq_.empty()) {
        now_ = std::max(now_, trace_[idx_].arrival);
        continue;
      }
      update_drain_mode();
      bool serve_write;
      if (drain_mode_)
        serve_write = !writeq_.empty();
      else if (!readq_.empty())
        serve_write = false;
      else
        serve_write = true;
      issue(serve_write);
    }
    finalize_frames();
    report_.total_cycles = std::max(report_.total_cycles, last_data_end_);
    if (lane_.active) report_.total_cycles = std::max(report_.total_cycles, prev_t1_prime_);
    uint64_t n = report_.reads + report_.writes;
    report_.throughput_rpkc =
        1000.0 * static_cast<double>(n) / static_cast<double>(std::max<uint64_t>(1, report_.total_cycles));
    if (report_.reads)
      report_.avg_read_latency = latency_sum_ / static_cast<double>(report_.reads);
    report_.ecc_lane_utilization =
        static_cast<double>(ecc_busy_) / static_cast<double>(std::max<uint64_t>(1, report_.total_cycles));
    return std::move(report_);
  }

 private:
  void admit() {
    while (idx_ < trace_.size() && trace_[idx_].arrival <= now_) {
      const MemRequest& r = trace_[idx_];
      uint64_t at = std::max(r.arrival, now_);
      if (r.is_write) {
        if (writeq_.size() >= static_cast<size_t>(p_.write_queue_capacity)) break;
        writeq_.push_back({r, map_address(r.addr, geom_), at});
      } else {
        if (readq_.size() >= static_cast<size_t>(p_.read_queue_capacity)) break;
        readq_.push_back({r, map_address(r.addr, geom_), at});
      }
      report_.max_write_queue_depth = std::max(report_.max_write_queue_depth, writeq_.size());
      ++idx_;
    }
  }

  void update_drain_mode() {
    if (writeq_.size() >= static_cast<size_t>(p_.wq_drain_high)) drain_mode_ = true;
    if (drain_mode_ && writeq_.size() <= static_cast<size_t>(p_.wq_drain_low)) drain_mode_ = false;
    if (writeq_.empty()) drain_mode_ = false;
  }

  // FR-FCFS: first row hit in age order, else the oldest entry.
  size_t pick(const std::deque<QueueEntry>& q) const {
    for (size_t i = 0; i < q.size(); ++i) {
      const auto& b = ranks_[q[i].loc.rank].banks[q[i].loc.bank];
      if (b.open_row == q[i].loc.row) return i;
    }
    return 0;
  }

  void issue(bool is_write) {
    auto& q = is_write ? writeq_ : readq_;
    size_t qi = pick(q);
    QueueEntry e = q[qi];
    q.erase(q.begin() + static_cast<long>(qi));

    RankState& rank = ranks_[e.loc.rank];
    BankState& bank = rank.banks[e.loc.bank];
    const uint64_t burst = static_cast<uint64_t>(
        std::llround(p_.t_burst * p_.access_granularity * geom_.ranks[e.loc.rank].burst_scale));
    const int cwl = p_.cl - 2;

    // Bank preparation (PRE/ACT) runs on the bank's own timeline starting at
    // admission; the command bus itself is not modeled.
    const bool row_miss = bank.open_row != e.loc.row;
    uint64_t act_planned = 0;
    uint64_t col = e.admit;
    if (row_miss) {
      uint64_t act;
      if (bank.open_row >= 0) {
        uint64_t pre = std::max(e.admit, bank.pre_ok_at);
        act = std::max(pre + p_.n_rp, bank.act_ok_at);
      } else {
        act = std::max(e.admit, bank.act_ok_at);
      }
      act_planned = act;
      col = std::max(col, act + p_.n_rcd);
    } else {
      col = std::max(col, bank.col_ok_at);
    }

    const uint64_t ccd_s = std::max<uint64_t>(p_.n_ccd_s, burst);
    const uint64_t ccd_l = std::max<uint64_t>(p_.n_ccd_l, burst);
    col = std::max(col, rank.last_col_any + ccd_s);
    col = std::max(col, rank.last_col_bg[e.loc.bg] + ccd_l);
    if (is_write)
      col = std::max(col, rank.last_wr_col_bg[e.loc.bg] + std::max<uint64_t>(p_.n_ccd_l_wr, burst));
    else
      col = std::max(col, std::max(rank.last_write_data_end + p_.t_wtr_l,
                                   last_write_data_end_any_ + p_.t_wtr_s));

    uint64_t data_start = col + (is_write ? cwl : p_.cl);
    data_start = std::max(data_start, bus_free_);
    if (is_write && last_bus_was_read_) data_start = std::max(data_start, last_data_end_ + p_.t_rtw);

    if (is_write && lane_.active) {
      if (!in_write_frame_) {
        // A new write frame may not begin while the slow chip is still
        // draining the previous frame's parity.
        if (data_start < prev_t1_prime_) {
          report_.slow_stall_cycles += prev_t1_prime_ - data_start;
          data_start = prev_t1_prime_;
        }
      }
      while (parity_completions_.size() >= static_cast<size_t>(p_.parity_buffer_entries)) {
        data_start = std::max(data_start, parity_completions_.front());
        prune_parity(data_start);
      }
    }

    col = data_start - (is_write ? cwl : p_.cl);
    uint64_t data_end = data_start + burst;

    // Frame bookkeeping.
    if (is_write) {
      if (!in_write_frame_) {
        close_read_frame();
        in_write_frame_ = true;
        frame_start_ = data_start;
      }
      frame_last_write_end_ = data_end;
      if (lane_.active) {
        uint64_t svc_start = std::max(data_start + burst + lane_.buffer_latency, parity_tail_);
        parity_tail_ = svc_start + scaled_up(burst, lane_.ratio);
        parity_completions_.push_back(parity_tail_);
        prune_parity(data_start);
      }
    } else {
      if (in_write_frame_) {
        in_write_frame_ = false;
        uint64_t t1 = frame_last_write_end_;
        uint64_t t1p = t1;
        if (lane_.active) {
          t1p = frame_start_ + scaled_up(t1 - frame_start_, lane_.ratio) + lane_.buffer_latency;
          ecc_busy_ += t1p - frame_start_;
        }
        prev_t1_prime_ = std::max(prev_t1_prime_, t1p);
        pending_frame_ = FrameRecord{frame_start_, t1, t1p, 0};
        have_pending_frame_ = true;
      }
      last_read_end_ = data_end;
    }

    // Commit bank/rank state.
    if (row_miss) {
      bank.open_row = e.loc.row;
      bank.col_ok_at = act_planned + p_.n_rcd;
      bank.pre_ok_at = act_planned + p_.n_ras;
      bank.act_ok_at = act_planned;
    }
    if (is_write)
      bank.pre_ok_at = std::max(bank.pre_ok_at, data_end + p_.t_wr);
    else
      bank.pre_ok_at = std::max(bank.pre_ok_at, data_end);
    rank.last_col_any = col;
    rank.last_col_bg[e.loc.bg] = col;
    if (is_write) {
      rank.last_wr_col_bg[e.loc.bg] = col;
      rank.last_write_data_end = data_end;
      last_write_data_end_any_ = data_end;
      ++report_.writes;
    } else {
      // Decoupled correction: a flagged read pays a dedicated parity fetch
      // from the slow chip before it can retire.
      if (err_rate_ > 0.0) {
        Rng r(Rng::derive(err_seed_, {report_.reads}));
        if (r.next_unit() < err_rate_) {
          uint64_t fetch = scaled_up(burst, lane_.active ? lane_.ratio : 1.0) +
                           static_cast<uint64_t>(p_.cl) + lane_.buffer_latency;
          data_end += fetch;
          ecc_busy_ += fetch;
          ++report_.flagged_reads;
        }
      }
      ++report_.reads;
      uint64_t lat = data_end - e.req.arrival;
      latency_sum_ += static_cast<double>(lat);
      report_.min_read_latency =
          report_.reads == 1 ? lat : std::min(report_.min_read_latency, lat);
      report_.max_read_latency = std::max(report_.max_read_latency, lat);
    }

    bus_free_ = data_end;
    last_data_end_ = std::max(last_data_end_, data_end);
    last_bus_was_read_ = !is_write;
    now_ = std::max(now_, col);
  }

  void prune_parity(uint64_t t) {
    while (!parity_completions_.empty() && parity_completions_.front() <= t)
      parity_completions_.pop_front();
  }

  void close_read_frame() {
    if (have_pending_frame_) {
      pending_frame_.t2 = last_read_end_;
      report_.frames.push_back(pending_frame_);
      have_pending_frame_ = false;
    }
  }

  void finalize_frames() {
    if (in_write_frame_) {
      uint64_t t1 = frame_last_write_end_;
      uint64_t t1p = t1;
      if (lane_.active) {
        t1p = frame_start_ + scaled_up(t1 - frame_start_, lane_.ratio) + lane_.buffer_latency;
        ecc_busy_ += t1p - frame_start_;
      }
      prev_t1_prime_ = std::max(prev_t1_prime_, t1p);
      report_.frames.push_back(FrameRecord{frame_start_, t1, t1p, t1});
      in_write_frame_ = false;
    }
    close_read_frame();
  }

  std::span<const MemRequest> trace_;
  const TimingParams& p_;
  PlanGeometry geom_;
  SlowLane lane_;
  double err_rate_;
  uint64_t err_seed_;

  std::vector<RankState> ranks_;
  std::deque<QueueEntry> readq_, writeq_;
  size_t idx_ = 0;
  uint64_t now_ = 0;
  bool drain_mode_ = false;

  uint64_t bus_free_ = 0;
  bool last_bus_was_read_ = false;
  uint64_t last_data_end_ = 0;
  uint64_t last_write_data_end_any_ = 0;
  uint64_t last_read_end_ = 0;

  bool in_write_frame_ = false;
  uint64_t frame_start_ = 0;
  uint64_t frame_last_write_end_ = 0;
  uint64_t prev_t1_prime_ = 0;
  uint64_t parity_tail_ = 0;
  std::deque<uint64_t> parity_completions_;
  FrameRecord pending_frame_{};
  bool have_pending_frame_ = false;

  double latency_sum_ = 0;
  uint64_t ecc_busy_ = 0;
  SimReport report_;
};

}  // namespace

SimReport simulate(std::span<const MemRequest> trace, const TimingParams& params,
                   const dimm::DimmTopology& topology, const dimm::RankPlan& plan) {
  Engine eng(trace, params, geometry_of(plan), slow_lane_of(topology), 0.0, 0);
  return eng.run();
}

SimReport simulate_with_errors(std::span<const MemRequest> trace, const TimingParams& params,
                               const dimm::DimmTopology& topology, const dimm::RankPlan& plan,
                               double block_error_rate, uint64_t seed) {
  if (block_error_rate < 0.0 || block_error_rate > 1.0)
    throw std::invalid_argument("block error rate must be in [0,1]");
  Engine eng(trace, params, geometry_of(plan), slow_lane_of(topology), block_error_rate, seed);
  return eng.run();
}

FrameStats frame_statistics(const SimReport& report, double threshold) {
  FrameStats st;
  double sum = 0;
  double minv = 0;
  size_t violations = 0;
  for (const FrameRecord& f : report.frames) {
    double wf = static_cast<double>(f.t1 - f.frame_start);
    if (wf <= 0) continue;
    double norm = static_cast<double>(f.t2 - f.t1) / wf;
    if (st.count == 0 || norm < minv) minv = norm;
    sum += norm;
    if (norm < threshold) ++violations;
    ++st.count;
  }
  if (st.count) {
    st.mean_norm_read_frame = sum / static_cast<double>(st.count);
    st.min_norm_read_frame = minv;
    st.violation_fraction = static_cast<double>(violations) / static_cast<double>(st.count);
  }
  return st;
}

}  // namespace screme::timing
