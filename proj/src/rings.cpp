#include "momentlab/rings.hpp"

namespace momentlab {

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for all 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p), barrett_(p > 0 ? ~std::uint64_t{0} / p : 0) {
  if (p < 3 || p >= (1u << 31) || !is_prime(p))
    throw DomainError("PrimeField: " + std::to_string(p) + " is not an odd prime below 2^31");
}

PrimeField::value_type PrimeField::from_integer(const Integer& v) const {
  Integer r = v % p_;
  if (r < 0) r += p_;
  return static_cast<value_type>(r.get_ui());
}

PrimeField::value_type PrimeField::from_rational(const Rational& v) const {
  const value_type den = from_integer(v.get_den());
  if (den == 0)
    throw DomainError("denominator " + v.get_den().get_str() + " is divisible by " + std::to_string(p_));
  return mul(from_integer(v.get_num()), inv(den));
}

PrimeField::value_type PrimeField::pow(value_type a, std::uint64_t e) const {
  return static_cast<value_type>(powmod64(a, e, p_));
}

PrimeField::value_type PrimeField::inv(value_type a) const {
  if (a == 0) throw DomainError("division by zero in " + name());
  return pow(a, p_ - 2);
}

}  // namespace momentlab
