#pragma once

// Gaussian moment forms.
//
// Normalization: moment_form returns
//     s_d(l, q) = sum_k 2^-k * d!/(k!(d-2k)!) * q^k * l^(d-2k),
// whose l^d coefficient is 1. The degree-d homogeneous part of the moment
// generating series exp(l + q/2) is s_d / d!, and as a polynomial in X the
// coefficient of X^a in s_d equals multinomial(d; a) * E[Y^a].

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "momentlab/dense_form.hpp"

namespace momentlab {

/// Position of Sigma_{jk} (j <= k) in row-major upper-triangular storage.
inline std::size_t tri_index(int j, int k, int n) {
  if (j > k) std::swap(j, k);
  return static_cast<std::size_t>(j) * n - static_cast<std::size_t>(j) * (j - 1) / 2 + (k - j);
}
inline std::size_t tri_size(int n) { return static_cast<std::size_t>(n) * (n + 1) / 2; }

/// One Gaussian: mean mu (l = mu^T X) and symmetric Sigma (q = X^T Sigma X),
/// Sigma stored as its upper triangle.
template <Ring R>
struct GaussianParams {
  using value_type = typename R::value_type;

  R ring;
  int n = 0;
  std::vector<value_type> mean;
  std::vector<value_type> quad;

  GaussianParams(R r, int n_vars, std::vector<value_type> mu, std::vector<value_type> sigma_upper)
      : ring(std::move(r)), n(n_vars), mean(std::move(mu)), quad(std::move(sigma_upper)) {
    if (static_cast<int>(mean.size()) != n) throw DomainError("GaussianParams: mean has wrong length");
    if (quad.size() != tri_size(n)) throw DomainError("GaussianParams: Sigma storage has wrong length");
  }

  const value_type& sigma(int j, int k) const { return quad[tri_index(j, k, n)]; }

  DenseForm<R> linear_form() const { return DenseForm<R>(ring, n, 1, mean); }

  /// q = sum_j Sigma_jj X_j^2 + sum_{j<k} 2 Sigma_jk X_j X_k.
  DenseForm<R> quadratic_form() const {
    std::vector<value_type> c(monomial_count(n, 2), ring.zero());
    const auto two = ring.from_int(2);
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        ExponentVector e(n, 0);
        ++e[j];
        ++e[k];
        c[monomial_rank(e, 2)] = j == k ? sigma(j, k) : ring.mul(two, sigma(j, k));
      }
    return DenseForm<R>(ring, n, 2, std::move(c));
  }

  /// Inverse of (linear_form, quadratic_form); halves off-diagonal entries.
  static GaussianParams from_forms(const DenseForm<R>& l, const DenseForm<R>& q) {
    l.check_compatible(q, false);
    if (l.degree() != 1 || q.degree() != 2) throw DomainError("from_forms: need degrees 1 and 2");
    const R& ring = l.ring();
    const int n = l.num_vars();
    const auto half = ring.inv(ring.from_int(2));
    std::vector<value_type> s(tri_size(n));
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        ExponentVector e(n, 0);
        ++e[j];
        ++e[k];
        const auto& c = q.coefficient(e);
        s[tri_index(j, k, n)] = j == k ? c : ring.mul(half, c);
      }
    return GaussianParams(ring, n, l.coeffs(), std::move(s));
  }
};

template <Ring R>
struct MixtureComponent {
  typename R::value_type weight;
  GaussianParams<R> params;
};

template <Ring R>
struct MixtureParams {
  std::vector<MixtureComponent<R>> components;

  std::size_t size() const { return components.size(); }
  int num_vars() const { return components.empty() ? 0 : components.front().params.n; }
};

template <Ring To>
GaussianParams<To> convert(const GaussianParams<RationalField>& p, const To& ring) {
  std::vector<typename To::value_type> mu, s;
  for (const auto& x : p.mean) mu.push_back(ring.from_rational(x));
  for (const auto& x : p.quad) s.push_back(ring.from_rational(x));
  return GaussianParams<To>(ring, p.n, std::move(mu), std::move(s));
}

template <Ring To>
MixtureParams<To> convert(const MixtureParams<RationalField>& m, const To& ring) {
  MixtureParams<To> out;
  for (const auto& c : m.components) out.components.push_back({ring.from_rational(c.weight), convert(c.params, ring)});
  return out;
}

/// d! / (k! (d-2k)!). Throws DomainError when 2k > d.
Integer duonomial(int d, int k);

/// 2^-k * duonomial(d, k); always an integer (C(d,2k) * (2k-1)!!).
Integer moment_coefficient(int d, int k);

/// s_d viewed as a polynomial in (L, Q): coeffs[k] multiplies Q^k L^(d-2k).
struct BivariateMomentPoly {
  int d = 0;
  std::vector<Rational> coeffs;

  /// Renders e.g. "ℓ^6 + 15qℓ^4 + 45q^2ℓ^2 + 15q^3".
  std::string to_string() const;
};

BivariateMomentPoly bivariate_moment_poly(int d);

/// s_d(l, q) expanded in the monomial basis. d = 0 gives the constant 1.
template <Ring R>
DenseForm<R> moment_form(const DenseForm<R>& l, const DenseForm<R>& q, int d) {
  l.check_compatible(q, false);
  if (l.degree() != 1 || q.degree() != 2) throw DomainError("moment_form: need a linear and a quadratic form");
  if (d < 0) throw DomainError("moment_form: negative degree");
  const R& ring = l.ring();
  const int n = l.num_vars();
  std::vector<DenseForm<R>> lpow{DenseForm<R>::constant(ring, n, ring.one())};
  for (int j = 1; j <= d; ++j) lpow.push_back(multiply(lpow.back(), l));
  DenseForm<R> result(ring, n, d);
  DenseForm<R> qk = DenseForm<R>::constant(ring, n, ring.one());
  for (int k = 0; 2 * k <= d; ++k) {
    if (k > 0) qk = multiply(qk, q);
    const auto c = ring.from_rational(Rational(moment_coefficient(d, k)));
    result = result + multiply(qk, lpow[d - 2 * k]).scaled(c);
  }
  return result;
}

template <Ring R>
DenseForm<R> moment_form(const GaussianParams<R>& p, int d) {
  return moment_form(p.linear_form(), p.quadratic_form(), d);
}

/// sum_i lambda_i s_d(l_i, q_i).
template <Ring R>
DenseForm<R> mixture_moment(const MixtureParams<R>& m, int d) {
  if (m.components.empty()) throw DomainError("mixture_moment: empty mixture");
  const auto& first = m.components.front().params;
  DenseForm<R> acc(first.ring, first.n, d);
  for (const auto& c : m.components) {
    if (!(c.params.ring == first.ring)) throw RingMismatch("mixture components over different rings");
    if (c.params.n != first.n) throw DomainError("mixture components with different variable counts");
    acc = acc + moment_form(c.params, d).scaled(c.weight);
  }
  return acc;
}

/// Exact d-th root of a positive rational, if it exists.
std::optional<Rational> rational_root(const Rational& x, int d);

/// Uniform-weight mixture with the same degree-d moments:
/// mu_i -> (m lambda_i)^(1/d) mu_i, Sigma_i -> (m lambda_i)^(2/d) Sigma_i.
/// Returns nullopt when some (m lambda_i)^(1/d) is irrational.
std::optional<MixtureParams<RationalField>> try_rescale_to_uniform(const MixtureParams<RationalField>& m, int d);
MixtureParams<FloatRing> rescale_to_uniform(const MixtureParams<FloatRing>& m, int d);
/// Exact when the roots are rational, otherwise the float result.
std::variant<MixtureParams<RationalField>, MixtureParams<FloatRing>> rescale_to_uniform(
    const MixtureParams<RationalField>& m, int d);

/// Checks s_d = l s_{d-1} + (d-1) q s_{d-2} coefficient-exactly on random
/// rational (l, q) in n variables.
bool euler_recurrence_check(int d, int trials, int n = 3, std::uint64_t seed = 7);

/// Coefficients (low to high in t) of u_k(t) = s^_k(1, t), where s^_k
/// strips the factor L from odd k.
std::vector<Integer> dehomogenized_moment(int k);

/// Sylvester resultant of two univariate integer polynomials (coefficients
/// low to high, nonzero leading coefficients), by fraction-free elimination.
Integer sylvester_resultant(const std::vector<Integer>& f, const std::vector<Integer>& g);

struct CommonRootReport {
  int d = 0;
  Integer resultant;
  bool shares_root = false;
};

/// Resultant of u_{d-1} and u_{d-2}; supported for 4 <= d <= 9.
CommonRootReport common_root_check(int d);

/// All primes p witnessing Eisenstein irreducibility of s^_k(L, 1).
std::vector<int> eisenstein_witnesses(int k);

/// The largest prime witness, i.e. the largest prime factor of the constant
/// term (2j-1)!! that satisfies the criterion. k in 3..8.
std::optional<int> eisenstein_check(int k);

/// Empirical moment form of N(mu, Sigma) from `samples` Cholesky draws,
/// returned in s_d normalization: coefficient of X^a is
/// multinomial(d; a) * mean(Y^a).
DenseForm<FloatRing> empirical_moment_form(const GaussianParams<FloatRing>& p, int d, std::size_t samples,
                                           std::uint64_t seed);

}  // namespace momentlab
