#include <vector>

#include "doctest.h"
#include "screme/rng.hpp"
#include "screme/rs_codec.hpp"

using namespace screme::rs;
using screme::Rng;
using screme::gf::alpha_pow;

namespace {

std::array<FieldElement, 8> random_data(Rng& rng) {
  std::array<FieldElement, 8> d;
  for (auto& x : d) x = FieldElement(uint8_t(rng.next_below(256)));
  return d;
}

}  // namespace

TEST_CASE("encode examples") {
  auto pts = EvalPoints::standard();
  std::array<FieldElement, 8> zero{};
  auto cw = encode(zero, pts, 2);
  CHECK(cw.checks[0].value() == 0);
  CHECK(cw.checks[1].value() == 0);

  std::array<FieldElement, 8> e0{};
  e0[0] = FieldElement(1);
  cw = encode(e0, pts, 2);
  CHECK(cw.checks[0].value() == 1);  // x0^0 = 1
  CHECK(cw.checks[1].value() == 1);

  // a_1 = 1: p0 = x0, p1 = x1 (direct evaluation)
  std::array<FieldElement, 8> e1{};
  e1[1] = FieldElement(1);
  cw = encode(e1, pts, 2);
  CHECK(cw.checks[0].value() == pts.x0.value());
  CHECK(cw.checks[1].value() == pts.x1.value());

  CHECK_THROWS_AS((void)encode(zero, pts, 4), std::invalid_argument);
}

TEST_CASE("syndromes") {
  auto pts = EvalPoints::standard();
  Rng rng(7);
  auto cw = encode(random_data(rng), pts, 2);
  auto s = syndromes(cw, pts);
  CHECK(s[0].value() == 0);
  CHECK(s[1].value() == 0);

  // error on a_j scales by the locator of j
  auto corrupted = cw;
  FieldElement e(0x3C);
  corrupted.add_error(3, e);
  s = syndromes(corrupted, pts);
  CHECK(s[0].value() == (e * screme::gf::pow(pts.x0, 3)).value());
  CHECK(s[1].value() == (e * screme::gf::pow(pts.x1, 3)).value());

  // error on p0 shows in S0 only
  corrupted = cw;
  corrupted.add_error(kP0, e);
  s = syndromes(corrupted, pts);
  CHECK(s[0].value() == e.value());
  CHECK(s[1].value() == 0);
}

TEST_CASE("decode_ssc round trip and single-error completeness") {
  auto pts = EvalPoints::standard();
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto data = random_data(rng);
    auto cw = encode(data, pts, 2);
    CHECK(decode_ssc(cw, pts).kind == DecodeKind::Clean);

    for (int chip = 0; chip < 10; ++chip) {
      for (int ev = 1; ev < 256; ++ev) {
        auto rx = cw;
        rx.add_error(chip, FieldElement(uint8_t(ev)));
        auto res = decode_ssc(rx, pts);
        REQUIRE(res.kind == DecodeKind::Corrected);
        CHECK(res.chip == chip);
        CHECK(res.magnitude.value() == ev);
        CHECK(res.delivered == data);
      }
    }
  }
}

TEST_CASE("decode_ssc double errors are never silently wrong about clean data") {
  // brute-force search for a pair with a non-locator ratio -> Uncorrectable
  auto pts = EvalPoints::standard();
  std::array<FieldElement, 8> zero{};
  auto cw = encode(zero, pts, 2);
  bool found_due = false;
  for (int e1 = 1; e1 < 9 && !found_due; ++e1) {
    for (int e2 = 1; e2 < 9 && !found_due; ++e2) {
      auto rx = cw;
      rx.add_error(1, FieldElement(uint8_t(e1)));
      rx.add_error(4, FieldElement(uint8_t(e2)));
      if (decode_ssc(rx, pts).kind == DecodeKind::Uncorrectable) found_due = true;
    }
  }
  CHECK(found_due);
}

TEST_CASE("detect_phase") {
  auto pts = EvalPoints::standard();
  Rng rng(23);
  auto data = random_data(rng);
  auto cw = encode(data, pts, 2);
  CHECK(detect_phase(cw, pts) == DetectOutcome::Pass);

  // any single-bit data error flags
  for (int chip = 0; chip < 8; ++chip) {
    for (int b = 0; b < 8; ++b) {
      auto rx = cw;
      rx.add_error(chip, FieldElement(uint8_t(1 << b)));
      CHECK(detect_phase(rx, pts) == DetectOutcome::Flag);
    }
  }

  // p1 errors are invisible to the detect phase
  auto rx = cw;
  rx.add_error(kP1, FieldElement(0xAB));
  CHECK(detect_phase(rx, pts) == DetectOutcome::Pass);

  // S0-cancelling pair: e2 = e1 * x0^(i-j) escapes
  FieldElement e1(0x35);
  int i = 2, j = 5;
  FieldElement e2 = e1 * screme::gf::pow(pts.x0, i) * screme::gf::pow(pts.x0, j).inverse();
  rx = cw;
  rx.add_error(i, e1);
  rx.add_error(j, e2);
  CHECK(detect_phase(rx, pts) == DetectOutcome::Pass);
  // ...and the full decoder on the same pattern never raises a DUE either
  auto full = decode_ssc(rx, pts);
  CHECK(full.kind != DecodeKind::Uncorrectable);
}

TEST_CASE("decode_decoupled equals decode_ssc whenever the detect phase flags") {
  auto pts = EvalPoints::standard();
  Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    auto data = random_data(rng);
    auto cw = encode(data, pts, 2);
    auto rx = cw;
    int nerr = 1 + static_cast<int>(rng.next_below(3));
    for (int k = 0; k < nerr; ++k)
      rx.add_error(static_cast<int>(rng.next_below(10)),
                   FieldElement(uint8_t(1 + rng.next_below(255))));
    auto dec = decode_decoupled(rx, pts);
    if (detect_phase(rx, pts) == DetectOutcome::Flag) {
      auto ssc = decode_ssc(rx, pts);
      CHECK(dec.kind == ssc.kind);
      CHECK(dec.chip == ssc.chip);
      CHECK(dec.delivered == ssc.delivered);
    } else {
      CHECK(dec.kind == DecodeKind::Clean);
      CHECK(dec.delivered == rx.data);
    }
  }
}

TEST_CASE("erasure decoding, 2 checks") {
  auto pts = EvalPoints::standard();
  Rng rng(41);
  auto data = random_data(rng);
  auto cw = encode(data, pts, 2);

  for (int chip = 0; chip < 10; ++chip) {
    auto rx = cw;
    rx.add_error(chip, FieldElement(0x7E));
    std::vector<int> erased = {chip};
    auto res = decode_with_erasures(rx, pts, erased);
    REQUIRE(res.kind == DecodeKind::Corrected);
    CHECK(res.delivered == data);
  }

  // two erasures exceed the SSC configuration
  auto rx = cw;
  rx.add_error(1, FieldElement(0x11));
  rx.add_error(2, FieldElement(0x22));
  std::vector<int> erased = {1, 2};
  CHECK(decode_with_erasures(rx, pts, erased).kind == DecodeKind::Uncorrectable);

  // erasure hint plus a hidden extra error is caught by the check equation
  rx = cw;
  rx.add_error(1, FieldElement(0x11));
  rx.add_error(5, FieldElement(0x22));
  std::vector<int> one = {1};
  CHECK(decode_with_erasures(rx, pts, one).kind == DecodeKind::Uncorrectable);

  std::vector<int> bad = {12};
  CHECK_THROWS_AS((void)decode_with_erasures(cw, pts, bad), std::domain_error);
}

TEST_CASE("erasure decoding, 3 checks") {
  auto pts = EvalPoints::standard();
  Rng rng(43);
  auto data = random_data(rng);
  auto cw = encode(data, pts, 3);

  // any two erased chips recover
  for (int a = 0; a < 11; ++a) {
    for (int b = a + 1; b < 11; ++b) {
      auto rx = cw;
      rx.add_error(a, FieldElement(0x55));
      rx.add_error(b, FieldElement(0xAA));
      std::vector<int> erased = {a, b};
      auto res = decode_with_erasures(rx, pts, erased);
      REQUIRE(res.kind == DecodeKind::Corrected);
      CHECK(res.delivered == data);
    }
  }

  // three erasures, no extra error
  auto rx = cw;
  rx.add_error(0, FieldElement(0x01));
  rx.add_error(4, FieldElement(0x02));
  rx.add_error(9, FieldElement(0x03));
  std::vector<int> three = {0, 4, 9};
  auto res = decode_with_erasures(rx, pts, three);
  REQUIRE(res.kind == DecodeKind::Corrected);
  CHECK(res.delivered == data);

  // erasure + one unknown error (e + 2t <= 3)
  for (int unknown = 0; unknown < 11; ++unknown) {
    if (unknown == 6) continue;
    rx = cw;
    rx.add_error(6, FieldElement(0x77));
    rx.add_error(unknown, FieldElement(0x13));
    std::vector<int> e6 = {6};
    auto r = decode_with_erasures(rx, pts, e6);
    REQUIRE(r.kind == DecodeKind::Corrected);
    CHECK(r.delivered == data);
  }
}

TEST_CASE("dsd-ssc corrects singles, flags all small doubles") {
  auto pts = EvalPoints::standard();
  Rng rng(47);
  auto data = random_data(rng);
  auto cw = encode(data, pts, 3);
  CHECK(decode_dsd_ssc(cw, pts).kind == DecodeKind::Clean);

  for (int chip = 0; chip < 11; ++chip) {
    for (int ev = 1; ev < 256; ++ev) {
      auto rx = cw;
      rx.add_error(chip, FieldElement(uint8_t(ev)));
      auto res = decode_dsd_ssc(rx, pts);
      REQUIRE(res.kind == DecodeKind::Corrected);
      CHECK(res.chip == chip);
      CHECK(res.delivered == data);
    }
  }

  for (int i = 0; i < 11; ++i) {
    for (int j = i + 1; j < 11; ++j) {
      for (int e1 = 1; e1 <= 8; ++e1) {
        for (int e2 = 1; e2 <= 8; ++e2) {
          auto rx = cw;
          rx.add_error(i, FieldElement(uint8_t(e1)));
          rx.add_error(j, FieldElement(uint8_t(e2)));
          CHECK(decode_dsd_ssc(rx, pts).kind == DecodeKind::Uncorrectable);
        }
      }
    }
  }
}

TEST_CASE("standard evaluation points have the unique-locator property") {
  auto pts = EvalPoints::standard();
  CHECK(pts.x0.value() == alpha_pow(8).value());
  CHECK(pts.x1.value() == alpha_pow(16).value());
  CHECK(pts.x2.value() == alpha_pow(24).value());
  FieldElement q = pts.x1 * pts.x0.inverse();
  bool seen[256] = {};
  for (int j = 0; j < 8; ++j) {
    uint8_t r = screme::gf::pow(q, j).value();
    CHECK(!seen[r]);
    seen[r] = true;
  }
}
