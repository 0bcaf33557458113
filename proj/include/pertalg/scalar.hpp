#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pertalg {

/* Exact rational scalars. All arithmetic in the library is exact; mpq_class
 * keeps values canonical (gcd 1, positive denominator) after arithmetic. */
using Rat = mpq_class;

inline Rat rat_from_string(const std::string& s) {
  mpq_class v;
  if (s.empty() || v.set_str(s, 10) != 0)
    throw std::invalid_argument("invalid rational '" + s + "'");
  if (v.get_den() == 0)
    throw std::invalid_argument("invalid rational '" + s + "': zero denominator");
  v.canonicalize();
  return v;
}

inline std::string rat_to_string(const Rat& v) { return v.get_str(); }

template <class S>
struct FieldTraits;

template <>
struct FieldTraits<Rat> {
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_long(long n) { return Rat(static_cast<signed long>(n)); }
  static bool is_zero(const Rat& a) { return a == 0; }
  static std::string str(const Rat& a) { return a.get_str(); }
};

/* Prime field scalars with the same interface as Rat, for modular runs of the
 * symbolic engine. P must be an odd prime. */
template <std::uint32_t P>
struct Fp {
  static_assert(P >= 3, "modulus too small");
  std::uint32_t v = 0;

  Fp() = default;
  explicit Fp(long n) {
    long r = n % static_cast<long>(P);
    if (r < 0) r += P;
    v = static_cast<std::uint32_t>(r);
  }

  friend Fp operator+(Fp a, Fp b) { return fromRaw((a.v + b.v) % P); }
  friend Fp operator-(Fp a, Fp b) { return fromRaw((a.v + P - b.v) % P); }
  friend Fp operator-(Fp a) { return fromRaw(a.v == 0 ? 0 : P - a.v); }
  friend Fp operator*(Fp a, Fp b) {
    return fromRaw(static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(a.v) * b.v) % P));
  }
  friend Fp operator/(Fp a, Fp b) {
    if (b.v == 0) throw std::domain_error("division by zero mod p");
    return a * b.inverse();
  }
  Fp& operator+=(Fp o) { return *this = *this + o; }
  Fp& operator-=(Fp o) { return *this = *this - o; }
  Fp& operator*=(Fp o) { return *this = *this * o; }
  friend bool operator==(Fp a, Fp b) { return a.v == b.v; }

  Fp inverse() const {
    Fp r = fromRaw(1), base = *this;
    std::uint32_t e = P - 2;
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  static Fp fromRaw(std::uint32_t raw) {
    Fp f;
    f.v = raw;
    return f;
  }
};

template <std::uint32_t P>
struct FieldTraits<Fp<P>> {
  static Fp<P> zero() { return Fp<P>(); }
  static Fp<P> one() { return Fp<P>(1); }
  static Fp<P> from_long(long n) { return Fp<P>(n); }
  static bool is_zero(Fp<P> a) { return a.v == 0; }
  static std::string str(Fp<P> a) { return std::to_string(a.v); }
};

}  // namespace pertalg
