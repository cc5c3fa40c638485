#pragma once

// Dense homogeneous polynomials over a pluggable ring.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "momentlab/errors.hpp"
#include "momentlab/monomial.hpp"
#include "momentlab/rings.hpp"

namespace momentlab {

/// A homogeneous degree-d form in n variables. Coefficients are indexed by
/// graded colex monomial rank (see monomial.hpp). Immutable once built.
template <Ring R>
class DenseForm {
 public:
  using ring_type = R;
  using value_type = typename R::value_type;

  /// The zero form.
  DenseForm(R ring, int n, int d)
      : ring_(std::move(ring)), n_(n), d_(d), coeffs_(monomial_count(n, d), ring_.zero()) {}

  DenseForm(R ring, int n, int d, std::vector<value_type> coeffs)
      : ring_(std::move(ring)), n_(n), d_(d), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != monomial_count(n, d))
      throw DomainError("DenseForm: expected " + std::to_string(monomial_count(n, d)) +
                        " coefficients, got " + std::to_string(coeffs_.size()));
  }

  static DenseForm monomial(R ring, std::span<const int> e, value_type c) {
    int d = 0;
    for (int x : e) d += x;
    DenseForm f(std::move(ring), static_cast<int>(e.size()), d);
    f.coeffs_[monomial_rank(e, d)] = std::move(c);
    return f;
  }

  /// The linear form X_j (0-based j).
  static DenseForm variable(R ring, int n, int j) {
    ExponentVector e(n, 0);
    e.at(j) = 1;
    auto one = ring.one();
    return monomial(std::move(ring), e, one);
  }

  static DenseForm constant(R ring, int n, value_type c) {
    return DenseForm(std::move(ring), n, 0, {std::move(c)});
  }

  const R& ring() const { return ring_; }
  int num_vars() const { return n_; }
  int degree() const { return d_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<value_type>& coeffs() const { return coeffs_; }
  const value_type& operator[](std::size_t i) const { return coeffs_[i]; }
  const value_type& coefficient(std::span<const int> e) const { return coeffs_[monomial_rank(e, d_)]; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!ring_.is_zero(c)) return false;
    return true;
  }

  friend bool operator==(const DenseForm& a, const DenseForm& b) {
    if (!(a.ring_ == b.ring_) || a.n_ != b.n_ || a.d_ != b.d_) return false;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      if (!a.ring_.equal(a.coeffs_[i], b.coeffs_[i])) return false;
    return true;
  }

  friend DenseForm operator+(const DenseForm& a, const DenseForm& b) {
    a.check_compatible(b, true);
    std::vector<value_type> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.ring_.add(a.coeffs_[i], b.coeffs_[i]);
    return DenseForm(a.ring_, a.n_, a.d_, std::move(c));
  }

  friend DenseForm operator-(const DenseForm& a, const DenseForm& b) {
    a.check_compatible(b, true);
    std::vector<value_type> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.ring_.sub(a.coeffs_[i], b.coeffs_[i]);
    return DenseForm(a.ring_, a.n_, a.d_, std::move(c));
  }

  DenseForm scaled(const value_type& s) const {
    std::vector<value_type> c(coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = ring_.mul(s, coeffs_[i]);
    return DenseForm(ring_, n_, d_, std::move(c));
  }

  DenseForm scaled(std::int64_t s) const { return scaled(ring_.from_int(s)); }

  friend DenseForm operator*(const DenseForm& f, const DenseForm& g) { return multiply(f, g); }

  /// Evaluate at a point (one ring element per variable).
  value_type evaluate(std::span<const value_type> x) const {
    if (static_cast<int>(x.size()) != n_) throw DomainError("evaluate: point has wrong dimension");
    value_type acc = ring_.zero();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (ring_.is_zero(coeffs_[i])) continue;
      auto e = monomial_unrank(i, n_, d_);
      value_type term = coeffs_[i];
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < e[j]; ++k) term = ring_.mul(term, x[j]);
      acc = ring_.add(acc, term);
    }
    return acc;
  }

  void check_compatible(const DenseForm& other, bool same_degree) const {
    if (!(ring_ == other.ring_))
      throw RingMismatch("forms over " + ring_.name() + " and " + other.ring_.name());
    if (n_ != other.n_) throw DomainError("forms have different variable counts");
    if (same_degree && d_ != other.d_) throw DomainError("forms have different degrees");
  }

 private:
  R ring_;
  int n_;
  int d_;
  std::vector<value_type> coeffs_;
};

/// Schoolbook product over coefficient pairs; zero coefficients of either
/// factor are skipped.
template <Ring R>
DenseForm<R> multiply(const DenseForm<R>& f, const DenseForm<R>& g) {
  f.check_compatible(g, false);
  const R& ring = f.ring();
  const int n = f.num_vars();
  const int d = f.degree() + g.degree();
  MonomialIndexer idx(n, d);

  auto nonzero_suffixes = [&](const DenseForm<R>& h) {
    std::vector<std::pair<std::size_t, std::vector<int>>> out;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (ring.is_zero(h[i])) continue;
      out.emplace_back(i, idx.suffix_sums(monomial_unrank(i, n, h.degree())));
    }
    return out;
  };
  const auto fs = nonzero_suffixes(f);
  const auto gs = nonzero_suffixes(g);

  std::vector<typename R::value_type> c(monomial_count(n, d), ring.zero());
  for (const auto& [i, ti] : fs)
    for (const auto& [j, tj] : gs) {
      auto& slot = c[idx.rank_of_sum(ti, tj)];
      slot = ring.add(slot, ring.mul(f[i], g[j]));
    }
  return DenseForm<R>(ring, n, d, std::move(c));
}

template <Ring R>
DenseForm<R> power(const DenseForm<R>& f, int k) {
  if (k < 0) throw DomainError("power: negative exponent");
  DenseForm<R> r = DenseForm<R>::constant(f.ring(), f.num_vars(), f.ring().one());
  for (int i = 0; i < k; ++i) r = multiply(r, f);
  return r;
}

/// Map coefficients of a rational form into another ring.
template <Ring To>
DenseForm<To> convert(const DenseForm<RationalField>& f, const To& ring) {
  std::vector<typename To::value_type> c;
  c.reserve(f.size());
  for (const auto& x : f.coeffs()) c.push_back(ring.from_rational(x));
  return DenseForm<To>(ring, f.num_vars(), f.degree(), std::move(c));
}

/// Degree-d part of exp(parts[0] + parts[1] + ...), where parts[i] is
/// homogeneous of degree i+1. Uses the graded recurrence
/// j * E_j = sum_i i * F_i * E_{j-i}, which needs division by j.
template <ExactRing R>
DenseForm<R> truncated_exp(std::span<const DenseForm<R>> parts, int d) {
  if (parts.empty()) throw DomainError("truncated_exp: need at least one part");
  if (d < 0) throw DomainError("truncated_exp: negative degree");
  const R& ring = parts[0].ring();
  const int n = parts[0].num_vars();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    parts[0].check_compatible(parts[i], false);
    if (parts[i].degree() != static_cast<int>(i) + 1)
      throw DomainError("truncated_exp: part " + std::to_string(i) + " must have degree " +
                        std::to_string(i + 1));
  }
  std::vector<DenseForm<R>> e;
  e.reserve(d + 1);
  e.push_back(DenseForm<R>::constant(ring, n, ring.one()));
  for (int j = 1; j <= d; ++j) {
    DenseForm<R> acc(ring, n, j);
    for (int i = 1; i <= j && i <= static_cast<int>(parts.size()); ++i)
      acc = acc + multiply(parts[i - 1], e[j - i]).scaled(static_cast<std::int64_t>(i));
    e.push_back(acc.scaled(ring.inv(ring.from_int(j))));
  }
  return e[d];
}

/// Overload that rejects inexact rings at runtime, for callers holding a
/// float form behind a generic interface.
inline DenseForm<FloatRing> truncated_exp(std::span<const DenseForm<FloatRing>>, int) {
  throw InexactRing("truncated_exp requires an exact coefficient ring");
}

}  // namespace momentlab
