#include "doctest.h"
#include "screme/gf256.hpp"
#include "screme/rng.hpp"

using screme::Rng;
using namespace screme::gf;

namespace {

// Independent oracle: carryless shift-and-xor multiply reduced by 0x11D.
uint8_t slow_mul(uint8_t a, uint8_t b) {
  unsigned acc = 0;
  unsigned aa = a;
  for (int i = 0; i < 8; ++i) {
    if (b & (1 << i)) acc ^= aa << i;
  }
  for (int bit = 15; bit >= 8; --bit) {
    if (acc & (1u << bit)) acc ^= kPoly << (bit - 8);
  }
  return static_cast<uint8_t>(acc);
}

FieldElement fe(uint8_t v) { return FieldElement(v); }

}  // namespace

TEST_CASE("addition is xor") {
  CHECK((fe(0x00) + fe(0x5A)).value() == 0x5A);
  CHECK((fe(0x5A) + fe(0x5A)).value() == 0x00);
  CHECK((fe(0x0F) + fe(0xF0)).value() == 0xFF);
}

TEST_CASE("multiplication examples") {
  CHECK((fe(0x57) * fe(0x01)).value() == 0x57);
  CHECK((fe(0x02) * fe(0x80)).value() == slow_mul(0x02, 0x80));
  CHECK(slow_mul(0x02, 0x80) == 0x1D);
  CHECK((fe(0x03) * fe(0x03)).value() == 0x05);
}

TEST_CASE("multiplication matches the carryless oracle everywhere") {
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b)
      CHECK((fe(uint8_t(a)) * fe(uint8_t(b))).value() == slow_mul(uint8_t(a), uint8_t(b)));
}

TEST_CASE("inverse") {
  CHECK(fe(0x01).inverse().value() == 0x01);
  // exhaustive-search oracle for 0x02
  uint8_t found = 0;
  for (int x = 1; x < 256; ++x)
    if (slow_mul(0x02, uint8_t(x)) == 1) found = uint8_t(x);
  CHECK(fe(0x02).inverse().value() == found);
  CHECK_THROWS_AS((void)fe(0x00).inverse(), std::domain_error);
  for (int a = 1; a < 256; ++a) CHECK((fe(uint8_t(a)) * fe(uint8_t(a)).inverse()).value() == 1);
}

TEST_CASE("pow") {
  CHECK(pow(fe(0x02), 0).value() == 0x01);
  CHECK(pow(fe(0x02), 8).value() == 0x1D);
  CHECK(pow(fe(0x02), 255).value() == 0x01);
  CHECK_THROWS_AS((void)pow(fe(0x00), -1), std::domain_error);
  CHECK(pow(fe(0x00), 0).value() == 0x01);
  CHECK(pow(fe(0x00), 3).value() == 0x00);
}

TEST_CASE("alpha is primitive: 255 distinct powers") {
  bool seen[256] = {};
  int distinct = 0;
  for (int k = 0; k < 255; ++k) {
    uint8_t v = alpha_pow(k).value();
    if (!seen[v]) {
      seen[v] = true;
      ++distinct;
    }
  }
  CHECK(distinct == 255);
  CHECK(!seen[0]);
}

TEST_CASE("algebra laws on random triples") {
  Rng rng(0xF00D);
  for (int i = 0; i < 100000; ++i) {
    FieldElement a(uint8_t(rng.next_below(256)));
    FieldElement b(uint8_t(rng.next_below(256)));
    FieldElement c(uint8_t(rng.next_below(256)));
    CHECK((a * (b + c)).value() == (a * b + a * c).value());
    CHECK((a * b).value() == (b * a).value());
    CHECK(((a * b) * c).value() == (a * (b * c)).value());
    if (!a.is_zero() && !b.is_zero())
      CHECK((a * b).inverse().value() == (a.inverse() * b.inverse()).value());
  }
}
