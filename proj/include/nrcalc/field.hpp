#pragma once

// Exact scalar types used throughout: arbitrary-precision rationals backed by
// GMP, and a small prime field whose elements carry their modulus. Every
// computation in the library is exact; there is no floating point anywhere.

#include <gmpxx.h>

#include <cassert>
#include <cstdint>
#include <string>

#include "nrcalc/errors.hpp"

namespace nrcalc {

using Rat = mpq_class;

inline bool is_zero(const Rat& a) { return sgn(a) == 0; }
inline Rat inverse(const Rat& a) {
  assert(sgn(a) != 0);
  return Rat(1) / a;
}
inline std::string to_string(const Rat& a) { return a.get_str(); }

// Z/p for an odd prime p < 2^31. The modulus travels with the element so that
// polynomials and matrices over Fp need no out-of-band context. A
// default-constructed element is the "universal" zero (p == 0) that combines
// with any modulus; every nonzero element is attached to its prime.
class Fp {
 public:
  Fp() : v_(0), p_(0) {}
  Fp(long long n, std::uint32_t p) : p_(p) {
    assert(p >= 2);
    long long r = n % static_cast<long long>(p);
    if (r < 0) r += p;
    v_ = static_cast<std::uint32_t>(r);
  }

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }

  friend Fp operator+(Fp a, Fp b) {
    std::uint32_t p = merged(a, b);
    if (p == 0) return Fp();
    std::uint64_t s = static_cast<std::uint64_t>(a.v_) + b.v_;
    if (s >= p) s -= p;
    return make(static_cast<std::uint32_t>(s), p);
  }
  friend Fp operator-(Fp a, Fp b) {
    std::uint32_t p = merged(a, b);
    if (p == 0) return Fp();
    std::uint64_t s = static_cast<std::uint64_t>(a.v_) + p - b.v_;
    if (s >= p) s -= p;
    return make(static_cast<std::uint32_t>(s), p);
  }
  friend Fp operator*(Fp a, Fp b) {
    std::uint32_t p = merged(a, b);
    if (p == 0 || a.v_ == 0 || b.v_ == 0) return Fp();
    std::uint64_t s = static_cast<std::uint64_t>(a.v_) * b.v_ % p;
    return make(static_cast<std::uint32_t>(s), p);
  }
  Fp operator-() const { return p_ == 0 ? Fp() : make(v_ == 0 ? 0 : p_ - v_, p_); }

  Fp& operator+=(Fp o) { return *this = *this + o; }
  Fp& operator-=(Fp o) { return *this = *this - o; }
  Fp& operator*=(Fp o) { return *this = *this * o; }

  friend bool operator==(Fp a, Fp b) {
    assert(a.p_ == 0 || b.p_ == 0 || a.p_ == b.p_);
    return a.v_ == b.v_;
  }
  friend bool operator!=(Fp a, Fp b) { return !(a == b); }

 private:
  static Fp make(std::uint32_t v, std::uint32_t p) {
    Fp r;
    r.v_ = v;
    r.p_ = v == 0 ? 0 : p;
    return r;
  }
  // Zero elements have p_ == 0, so mixing moduli is caught by the assert.
  static std::uint32_t merged(Fp a, Fp b) {
    if (a.p_ == 0) return b.p_;
    assert(b.p_ == 0 || a.p_ == b.p_);
    return a.p_;
  }

  std::uint32_t v_;
  std::uint32_t p_;
};

inline bool is_zero(Fp a) { return a.value() == 0; }

inline Fp inverse(Fp a) {
  assert(a.value() != 0);
  // Extended Euclid on (v, p); p is prime so the gcd is 1.
  std::int64_t r0 = a.modulus(), r1 = a.value(), s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  assert(r0 == 1);
  if (s0 < 0) s0 += a.modulus();
  return Fp(s0, a.modulus());
}

inline std::string to_string(Fp a) { return std::to_string(a.value()); }

inline Fp operator/(Fp a, Fp b) { return a * inverse(b); }

template <class K>
concept ScalarField = requires(K a, K b) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { a == b } -> std::convertible_to<bool>;
  { is_zero(a) } -> std::convertible_to<bool>;
  { inverse(a) } -> std::convertible_to<K>;
};

// Which field a run computes over. Every coefficient a computation creates
// from an integer goes through scalar_from_int, so the choice is made exactly
// once, at entry.
struct FieldMode {
  enum class Kind { Rationals, Prime } kind = Kind::Rationals;
  std::uint32_t p = 0;

  static FieldMode rationals() { return FieldMode{}; }
  static FieldMode prime(std::uint32_t p) {
    if (p < 3) throw InputError("prime field modulus must be an odd prime, got " + std::to_string(p));
    if (p % 2 == 0) throw InputError("prime field modulus must be odd, got " + std::to_string(p));
    for (std::uint32_t q = 3; static_cast<std::uint64_t>(q) * q <= p; q += 2)
      if (p % q == 0) throw InputError(std::to_string(p) + " is not prime");
    return FieldMode{Kind::Prime, p};
  }
  bool divides(long long n) const {
    return kind == Kind::Prime && n % static_cast<long long>(p) == 0;
  }
  std::string describe() const {
    return kind == Kind::Rationals ? "rationals" : "fp:" + std::to_string(p);
  }
};

template <ScalarField K>
K scalar_from_int(const FieldMode& fm, long long n);

template <>
inline Rat scalar_from_int<Rat>(const FieldMode&, long long n) {
  return Rat(static_cast<long>(n));
}

template <>
inline Fp scalar_from_int<Fp>(const FieldMode& fm, long long n) {
  assert(fm.kind == FieldMode::Kind::Prime);
  return Fp(n, fm.p);
}

}  // namespace nrcalc
