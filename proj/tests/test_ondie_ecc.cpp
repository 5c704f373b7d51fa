#include "doctest.h"
#include "screme/ondie_ecc.hpp"
#include "screme/rng.hpp"

using namespace screme::ondie;
using screme::Rng;

TEST_CASE("encode linearity") {
  CHECK(encode(0).check == 0);

  // single-bit payloads produce that bit's position code
  for (int i = 0; i < 64; ++i) {
    uint8_t c = encode(1ULL << i).check;
    CHECK(c == detail::kPos.pos_of_bit[i]);
  }

  // two bits xor their columns
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    int a = static_cast<int>(rng.next_below(64));
    int b = static_cast<int>(rng.next_below(64));
    uint64_t payload = (1ULL << a) ^ (1ULL << b);
    CHECK(encode(payload).check == (encode(1ULL << a).check ^ encode(1ULL << b).check));
  }
}

TEST_CASE("every stored single-bit flip is corrected") {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    uint64_t payload = rng.next_u64();
    ChipSlice s = encode(payload);
    auto clean = decode(s);
    CHECK(clean.outcome == OnDieOutcome::Clean);
    CHECK(clean.payload == payload);

    for (int i = 0; i < 64; ++i) {
      ChipSlice rx = s;
      rx.bits ^= 1ULL << i;
      auto out = decode(rx);
      CHECK(out.outcome == OnDieOutcome::CorrectedSingle);
      CHECK(out.payload == payload);
    }
    for (int k = 0; k < 7; ++k) {
      ChipSlice rx = s;
      rx.check ^= uint8_t(1 << k);
      auto out = decode(rx);
      CHECK(out.outcome == OnDieOutcome::CorrectedSingle);
      CHECK(out.payload == payload);
    }
  }
}

TEST_CASE("double flips never decode clean") {
  Rng rng(8);
  for (int t = 0; t < 2000; ++t) {
    uint64_t payload = rng.next_u64();
    ChipSlice s = encode(payload);
    int a = static_cast<int>(rng.next_below(64));
    int b;
    do {
      b = static_cast<int>(rng.next_below(64));
    } while (b == a);
    s.bits ^= (1ULL << a) | (1ULL << b);
    CHECK(decode(s).outcome != OnDieOutcome::Clean);
  }
}

TEST_CASE("marker model") {
  CHECK(marker_outcome(0, false) == OnDieOutcome::Clean);
  CHECK(marker_outcome(1ULL << 17, false) == OnDieOutcome::CorrectedSingle);
  CHECK(marker_outcome(0b11, false) == OnDieOutcome::FlaggedErasure);
  CHECK(marker_outcome(1ULL << 3, true) == OnDieOutcome::FlaggedErasure);
  CHECK(marker_outcome(0xFFFF, true) == OnDieOutcome::FlaggedErasure);
}
