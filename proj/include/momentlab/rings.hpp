#pragma once

// Coefficient rings used by the dense polynomial code.
//
// A ring object carries whatever runtime data its arithmetic needs (the
// modulus for F_p) and performs all arithmetic on its value_type. Every
// DenseForm stores the ring it was built over, so mixing forms from two
// different prime fields is a runtime error rather than silent garbage.

#include <cmath>
#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "momentlab/errors.hpp"

namespace momentlab {

using Rational = mpq_class;
using Integer = mpz_class;

/// Arbitrary-precision rationals. Exact.
struct RationalField {
  using value_type = Rational;
  static constexpr bool exact = true;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const {
    return Rational(Integer(static_cast<long>(v)));
  }
  value_type from_rational(const Rational& v) const { return v; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw DomainError("division by zero in rational field");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  double to_double(const value_type& a) const { return a.get_d(); }
  std::string to_string(const value_type& a) const { return a.get_str(); }

  std::string name() const { return "QQ"; }
  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

/// Z/pZ for an odd prime p < 2^31. Products fit in 64 bits.
class PrimeField {
 public:
  using value_type = std::uint32_t;
  static constexpr bool exact = true;

  explicit PrimeField(std::uint32_t p);

  std::uint32_t modulus() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }
  /// Throws DomainError when the denominator vanishes mod p.
  value_type from_rational(const Rational& v) const;
  value_type from_integer(const Integer& v) const;

  value_type add(value_type a, value_type b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type mul(value_type a, value_type b) const { return reduce(static_cast<std::uint64_t>(a) * b); }
  /// x mod p by Barrett reduction; valid for any 64-bit x.
  value_type reduce(std::uint64_t x) const {
    const auto q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * barrett_) >> 64);
    std::uint64_t r = x - q * p_;
    while (r >= p_) r -= p_;
    return static_cast<value_type>(r);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type inv(value_type a) const;
  value_type pow(value_type a, std::uint64_t e) const;
  bool is_zero(value_type a) const { return a == 0; }
  bool equal(value_type a, value_type b) const { return a == b; }
  /// Symmetric lift to (-p/2, p/2].
  double to_double(value_type a) const {
    return a > p_ / 2 ? -static_cast<double>(p_ - a) : static_cast<double>(a);
  }
  std::string to_string(value_type a) const { return std::to_string(a); }

  std::string name() const { return "GF(" + std::to_string(p_) + ")"; }
  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
  std::uint64_t barrett_;
};

/// IEEE double. Approximate; rejected wherever exactness is required.
struct FloatRing {
  using value_type = double;
  static constexpr bool exact = false;

  value_type zero() const { return 0.0; }
  value_type one() const { return 1.0; }
  value_type from_int(std::int64_t v) const { return static_cast<double>(v); }
  value_type from_rational(const Rational& v) const { return v.get_d(); }

  value_type add(value_type a, value_type b) const { return a + b; }
  value_type sub(value_type a, value_type b) const { return a - b; }
  value_type mul(value_type a, value_type b) const { return a * b; }
  value_type neg(value_type a) const { return -a; }
  value_type inv(value_type a) const {
    if (a == 0.0) throw DomainError("division by zero in float ring");
    return 1.0 / a;
  }
  bool is_zero(value_type a) const { return a == 0.0; }
  bool equal(value_type a, value_type b) const { return a == b; }
  double to_double(value_type a) const { return a; }
  std::string to_string(value_type a) const { return std::to_string(a); }

  std::string name() const { return "RR"; }
  friend bool operator==(const FloatRing&, const FloatRing&) { return true; }
};

template <class R>
concept Ring = requires(const R& r, const typename R::value_type& a) {
  { r.zero() } -> std::convertible_to<typename R::value_type>;
  { r.add(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.mul(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.is_zero(a) } -> std::convertible_to<bool>;
  { R::exact } -> std::convertible_to<bool>;
};

template <class R>
concept ExactRing = Ring<R> && R::exact;

bool is_prime(std::uint64_t n);

}  // namespace momentlab
