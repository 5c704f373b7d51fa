#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace screme::gf {

// GF(2^8), field polynomial x^8+x^4+x^3+x^2+1 (0x11D), generator alpha = 0x02.
inline constexpr unsigned kPoly = 0x11D;
inline constexpr uint8_t kAlpha = 0x02;

namespace detail {

struct Tables {
  std::array<uint8_t, 512> exp{};  // exp[i] = alpha^i, doubled to skip a mod
  std::array<int16_t, 256> log{};  // log[0] = -1
};

constexpr Tables build_tables() {
  Tables t{};
  unsigned x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<uint8_t>(x);
    t.log[x] = static_cast<int16_t>(i);
    x <<= 1;
    if (x & 0x100) x ^= kPoly;
  }
  for (int i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  t.log[0] = -1;
  return t;
}

inline constexpr Tables kTab = build_tables();

}  // namespace detail

class FieldElement {
 public:
  constexpr FieldElement() = default;
  constexpr explicit FieldElement(uint8_t v) : v_(v) {}

  constexpr uint8_t value() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  friend constexpr FieldElement operator+(FieldElement a, FieldElement b) {
    return FieldElement(static_cast<uint8_t>(a.v_ ^ b.v_));
  }
  FieldElement& operator+=(FieldElement o) {
    v_ ^= o.v_;
    return *this;
  }

  friend constexpr FieldElement operator*(FieldElement a, FieldElement b) {
    if (a.v_ == 0 || b.v_ == 0) return FieldElement(0);
    return FieldElement(detail::kTab.exp[detail::kTab.log[a.v_] + detail::kTab.log[b.v_]]);
  }
  FieldElement& operator*=(FieldElement o) { return *this = *this * o; }

  FieldElement inverse() const {
    if (v_ == 0) throw std::domain_error("gf256: zero has no inverse");
    return FieldElement(detail::kTab.exp[255 - detail::kTab.log[v_]]);
  }

  friend FieldElement operator/(FieldElement a, FieldElement b) { return a * b.inverse(); }

  friend constexpr bool operator==(FieldElement a, FieldElement b) = default;

 private:
  uint8_t v_ = 0;
};

constexpr FieldElement add(FieldElement a, FieldElement b) { return a + b; }
constexpr FieldElement mul(FieldElement a, FieldElement b) { return a * b; }
inline FieldElement inv(FieldElement a) { return a.inverse(); }

// alpha^e for any integer exponent (group order 255).
constexpr FieldElement alpha_pow(long long e) {
  long long r = e % 255;
  if (r < 0) r += 255;
  return FieldElement(detail::kTab.exp[static_cast<size_t>(r)]);
}

inline FieldElement pow(FieldElement a, long long e) {
  if (a.is_zero()) {
    if (e < 0) throw std::domain_error("gf256: negative power of zero");
    return e == 0 ? FieldElement(1) : FieldElement(0);
  }
  long long l = detail::kTab.log[a.value()];
  return alpha_pow(l * e);
}

}  // namespace screme::gf
