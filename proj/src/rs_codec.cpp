#include "screme/rs_codec.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <vector>

namespace screme::rs {

namespace {

DecodeResult passthrough(const Codeword& received, DecodeKind kind) {
  DecodeResult r;
  r.kind = kind;
  r.delivered = received.data;
  return r;
}

// Solve A x = b over GF(2^8); A is rows x cols with rows >= cols and the
// columns linearly independent (true for any <=3 erasure locators of this
// code). Extra rows are consistency checks.
struct LinSolve {
  bool consistent = false;
  std::array<FieldElement, 3> x{};
};

LinSolve solve_linear(std::array<std::array<FieldElement, 3>, 3> a,
                      std::array<FieldElement, 3> b, int rows, int cols) {
  for (int col = 0; col < cols; ++col) {
    int pivot = -1;
    for (int row = col; row < rows; ++row) {
      if (!a[row][col].is_zero()) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) return {};  // dependent columns; caller guarantees otherwise
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    FieldElement inv_p = a[col][col].inverse();
    for (int row = col + 1; row < rows; ++row) {
      if (a[row][col].is_zero()) continue;
      FieldElement f = a[row][col] * inv_p;
      for (int k = col; k < cols; ++k) a[row][k] += f * a[col][k];
      b[row] += f * b[col];
    }
  }
  for (int row = cols; row < rows; ++row) {
    if (!b[row].is_zero()) return {};
  }
  LinSolve out;
  out.consistent = true;
  for (int col = cols - 1; col >= 0; --col) {
    FieldElement acc = b[col];
    for (int k = col + 1; k < cols; ++k) acc += a[col][k] * out.x[k];
    out.x[col] = acc / a[col][col];
  }
  return out;
}

}  // namespace

Codeword encode(const std::array<FieldElement, kDataSymbols>& data, const EvalPoints& pts,
                int num_checks) {
  if (num_checks != 2 && num_checks != 3)
    throw std::invalid_argument("rs: num_checks must be 2 or 3");
  Codeword cw;
  cw.data = data;
  cw.num_checks = num_checks;
  for (int k = 0; k < num_checks; ++k) {
    FieldElement p;
    FieldElement xk = pts.at(k);
    FieldElement xpow(1);
    for (int i = 0; i < kDataSymbols; ++i) {
      p += data[i] * xpow;
      xpow *= xk;
    }
    cw.checks[k] = p;
  }
  return cw;
}

std::array<FieldElement, kMaxChecks> syndromes(const Codeword& received, const EvalPoints& pts) {
  std::array<FieldElement, kMaxChecks> s{};
  for (int k = 0; k < received.num_checks; ++k) {
    FieldElement acc;
    FieldElement xk = pts.at(k);
    FieldElement xpow(1);
    for (int i = 0; i < kDataSymbols; ++i) {
      acc += received.data[i] * xpow;
      xpow *= xk;
    }
    acc += received.checks[k];
    s[k] = acc;
  }
  return s;
}

DecodeResult decode_ssc(const Codeword& received, const EvalPoints& pts) {
  assert(received.num_checks == 2);
  auto s = syndromes(received, pts);
  if (s[0].is_zero() && s[1].is_zero()) return passthrough(received, DecodeKind::Clean);

  DecodeResult r;
  r.kind = DecodeKind::Corrected;
  r.delivered = received.data;
  // A lone nonzero syndrome is blamed on the corresponding check symbol
  // (minimum Hamming distance).
  if (!s[0].is_zero() && s[1].is_zero()) {
    r.chip = kP0;
    r.magnitude = s[0];
    return r;
  }
  if (s[0].is_zero() && !s[1].is_zero()) {
    r.chip = kP1;
    r.magnitude = s[1];
    return r;
  }
  FieldElement ratio = s[1] / s[0];
  FieldElement q = pts.x1 / pts.x0;
  FieldElement qpow(1);
  for (int j = 0; j < kDataSymbols; ++j) {
    if (ratio == qpow) {
      r.chip = j;
      r.magnitude = s[0] / gf::pow(pts.x0, j);
      r.delivered[j] += r.magnitude;
      return r;
    }
    qpow *= q;
  }
  return passthrough(received, DecodeKind::Uncorrectable);
}

DetectOutcome detect_phase(const Codeword& received, const EvalPoints& pts) {
  FieldElement acc;
  FieldElement xpow(1);
  for (int i = 0; i < kDataSymbols; ++i) {
    acc += received.data[i] * xpow;
    xpow *= pts.x0;
  }
  acc += received.checks[0];
  return acc.is_zero() ? DetectOutcome::Pass : DetectOutcome::Flag;
}

DecodeResult decode_decoupled(const Codeword& received, const EvalPoints& pts) {
  if (detect_phase(received, pts) == DetectOutcome::Pass)
    return passthrough(received, DecodeKind::Clean);
  return decode_ssc(received, pts);
}

DecodeResult decode_dsd_ssc(const Codeword& received, const EvalPoints& pts) {
  assert(received.num_checks == 3);
  auto s = syndromes(received, pts);
  int nonzero = 0;
  for (int k = 0; k < 3; ++k) nonzero += !s[k].is_zero();
  if (nonzero == 0) return passthrough(received, DecodeKind::Clean);

  if (nonzero == 1) {
    DecodeResult r;
    r.kind = DecodeKind::Corrected;
    r.delivered = received.data;
    for (int k = 0; k < 3; ++k) {
      if (!s[k].is_zero()) {
        r.chip = kDataSymbols + k;
        r.magnitude = s[k];
      }
    }
    return r;
  }
  if (nonzero == 3) {
    FieldElement r1 = s[1] / s[0];
    FieldElement r2 = s[2] / s[0];
    FieldElement q1 = pts.x1 / pts.x0;
    FieldElement q2 = pts.x2 / pts.x0;
    FieldElement q1pow(1), q2pow(1);
    for (int j = 0; j < kDataSymbols; ++j) {
      if (r1 == q1pow && r2 == q2pow) {
        DecodeResult r;
        r.kind = DecodeKind::Corrected;
        r.chip = j;
        r.magnitude = s[0] / gf::pow(pts.x0, j);
        r.delivered = received.data;
        r.delivered[j] += r.magnitude;
        return r;
      }
      q1pow *= q1;
      q2pow *= q2;
    }
  }
  // Two nonzero syndromes can never be a single symbol error.
  return passthrough(received, DecodeKind::Uncorrectable);
}

DecodeResult decode_with_erasures(const Codeword& received, const EvalPoints& pts,
                                  std::span<const int> erased_chips) {
  const int r = received.num_checks;
  std::vector<int> erased(erased_chips.begin(), erased_chips.end());
  std::sort(erased.begin(), erased.end());
  erased.erase(std::unique(erased.begin(), erased.end()), erased.end());
  for (int p : erased) {
    if (p < 0 || p >= received.size())
      throw std::domain_error("rs: erased chip index out of range");
  }
  const int e = static_cast<int>(erased.size());

  if (e == 0) return r == 2 ? decode_ssc(received, pts) : decode_dsd_ssc(received, pts);
  if (e > (r == 2 ? 1 : 3)) return passthrough(received, DecodeKind::Uncorrectable);

  auto s = syndromes(received, pts);

  auto apply = [&](const std::vector<std::pair<int, FieldElement>>& fixes) {
    DecodeResult out;
    out.kind = DecodeKind::Corrected;
    out.delivered = received.data;
    bool all_zero = true;
    for (auto& [pos, val] : fixes) {
      if (!val.is_zero()) {
        all_zero = false;
        out.chip = pos;
        out.magnitude = val;
      }
      if (pos < kDataSymbols) out.delivered[pos] += val;
    }
    if (all_zero) out.kind = DecodeKind::Clean;
    return out;
  };

  std::array<std::array<FieldElement, 3>, 3> a{};
  std::array<FieldElement, 3> b{};
  for (int k = 0; k < r; ++k) b[k] = s[k];

  if (e <= r && e != 1) {
    // e unknowns, r equations, no room for extra errors.
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < e; ++j) a[k][j] = pts.locator(k, erased[j]);
    auto sol = solve_linear(a, b, r, e);
    if (!sol.consistent) return passthrough(received, DecodeKind::Uncorrectable);
    std::vector<std::pair<int, FieldElement>> fixes;
    for (int j = 0; j < e; ++j) fixes.emplace_back(erased[j], sol.x[j]);
    return apply(fixes);
  }

  // e == 1: solve the erasure alone first.
  const int p = erased[0];
  for (int k = 0; k < r; ++k) a[k][0] = pts.locator(k, p);
  auto sol = solve_linear(a, b, r, 1);
  if (sol.consistent) return apply({{p, sol.x[0]}});
  if (r == 2) return passthrough(received, DecodeKind::Uncorrectable);

  // 3 checks: one erasure plus one unknown error (e + 2t <= 3).
  int found = 0;
  std::pair<int, FieldElement> erased_fix{p, FieldElement(0)}, error_fix{-1, FieldElement(0)};
  for (int q = 0; q < received.size(); ++q) {
    if (q == p) continue;
    for (int k = 0; k < 3; ++k) {
      a[k][0] = pts.locator(k, p);
      a[k][1] = pts.locator(k, q);
      b[k] = s[k];
    }
    auto s2 = solve_linear(a, b, 3, 2);
    if (s2.consistent && !s2.x[1].is_zero()) {
      ++found;
      erased_fix.second = s2.x[0];
      error_fix = {q, s2.x[1]};
    }
  }
  if (found != 1) return passthrough(received, DecodeKind::Uncorrectable);
  return apply({erased_fix, error_fix});
}

}  // namespace screme::rs
