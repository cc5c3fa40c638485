#include "momentlab/moment_forms.hpp"

#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace momentlab {

namespace {

Integer factorial(int n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

std::string superscript(int e) { return e == 1 ? "" : "^" + std::to_string(e); }

}  // namespace

Integer duonomial(int d, int k) {
  if (k < 0 || d < 0 || 2 * k > d)
    throw DomainError("duonomial(" + std::to_string(d) + "," + std::to_string(k) + "): need 0 <= 2k <= d");
  return factorial(d) / (factorial(k) * factorial(d - 2 * k));
}

Integer moment_coefficient(int d, int k) {
  Integer two_k;
  mpz_ui_pow_ui(two_k.get_mpz_t(), 2, static_cast<unsigned long>(k));
  return duonomial(d, k) / two_k;
}

BivariateMomentPoly bivariate_moment_poly(int d) {
  if (d < 0) throw DomainError("bivariate_moment_poly: negative degree");
  BivariateMomentPoly p{d, {}};
  for (int k = 0; 2 * k <= d; ++k) p.coeffs.emplace_back(moment_coefficient(d, k));
  return p;
}

std::string BivariateMomentPoly::to_string() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) os << " + ";
    const int lexp = d - 2 * static_cast<int>(k);
    const bool unit = coeffs[k] == 1;
    if (!unit) os << coeffs[k].get_str();
    if (k > 0) os << "q" << superscript(static_cast<int>(k));
    if (lexp > 0) os << "ℓ" << superscript(lexp);
    if (unit && k == 0 && lexp == 0) os << "1";
  }
  return os.str();
}

std::optional<Rational> rational_root(const Rational& x, int d) {
  if (d < 1) throw DomainError("rational_root: degree must be positive");
  if (sgn(x) <= 0) return std::nullopt;
  Integer num, den;
  if (mpz_root(num.get_mpz_t(), x.get_num().get_mpz_t(), static_cast<unsigned long>(d)) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), x.get_den().get_mpz_t(), static_cast<unsigned long>(d)) == 0) return std::nullopt;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::optional<MixtureParams<RationalField>> try_rescale_to_uniform(const MixtureParams<RationalField>& m, int d) {
  if (m.components.empty()) throw DomainError("rescale_to_uniform: empty mixture");
  const Rational count(static_cast<long>(m.size()));
  const Rational uniform = 1 / count;
  MixtureParams<RationalField> out;
  for (const auto& c : m.components) {
    if (sgn(c.weight) <= 0) throw DomainError("rescale_to_uniform: weights must be positive");
    auto t = rational_root(count * c.weight, d);
    if (!t) return std::nullopt;
    const Rational t2 = *t * *t;
    auto p = c.params;
    for (auto& x : p.mean) x *= *t;
    for (auto& x : p.quad) x *= t2;
    out.components.push_back({uniform, std::move(p)});
  }
  return out;
}

MixtureParams<FloatRing> rescale_to_uniform(const MixtureParams<FloatRing>& m, int d) {
  if (m.components.empty()) throw DomainError("rescale_to_uniform: empty mixture");
  const double count = static_cast<double>(m.size());
  MixtureParams<FloatRing> out;
  for (const auto& c : m.components) {
    if (!(c.weight > 0.0)) throw DomainError("rescale_to_uniform: weights must be positive");
    const double t = std::pow(count * c.weight, 1.0 / d);
    auto p = c.params;
    for (auto& x : p.mean) x *= t;
    for (auto& x : p.quad) x *= t * t;
    out.components.push_back({1.0 / count, std::move(p)});
  }
  return out;
}

std::variant<MixtureParams<RationalField>, MixtureParams<FloatRing>> rescale_to_uniform(
    const MixtureParams<RationalField>& m, int d) {
  if (auto exact = try_rescale_to_uniform(m, d)) return std::move(*exact);
  return rescale_to_uniform(convert(m, FloatRing{}), d);
}

bool euler_recurrence_check(int d, int trials, int n, std::uint64_t seed) {
  if (d < 2) throw DomainError("euler_recurrence_check: need d >= 2");
  RationalField qq;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  auto random_form = [&](int deg) {
    std::vector<Rational> c(monomial_count(n, deg));
    for (auto& x : c) {
      x = Rational(num(rng), den(rng));
      x.canonicalize();
    }
    return DenseForm<RationalField>(qq, n, deg, std::move(c));
  };
  for (int t = 0; t < trials; ++t) {
    const auto l = random_form(1);
    const auto q = random_form(2);
    const auto lhs = moment_form(l, q, d);
    const auto rhs = multiply(l, moment_form(l, q, d - 1)) +
                     multiply(q, moment_form(l, q, d - 2)).scaled(static_cast<std::int64_t>(d - 1));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

std::vector<Integer> dehomogenized_moment(int k) {
  if (k < 1) throw DomainError("dehomogenized_moment: need k >= 1");
  // Coefficient of Q^j L^(k-2j) becomes the t^j coefficient after L = 1;
  // dividing by L for odd k does not change it.
  std::vector<Integer> u;
  for (int j = 0; 2 * j <= k; ++j) u.push_back(moment_coefficient(k, j));
  return u;
}

Integer sylvester_resultant(const std::vector<Integer>& f, const std::vector<Integer>& g) {
  if (f.empty() || g.empty() || f.back() == 0 || g.back() == 0)
    throw DomainError("sylvester_resultant: polynomials need nonzero leading coefficients");
  const std::size_t m = f.size() - 1;
  const std::size_t n = g.size() - 1;
  const std::size_t size = m + n;
  if (size == 0) return 1;
  // Rows: n shifted copies of f, then m shifted copies of g, highest degree first.
  std::vector<std::vector<Integer>> a(size, std::vector<Integer>(size, 0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i <= m; ++i) a[r][r + i] = f[m - i];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i <= n; ++i) a[n + r][r + i] = g[n - i];

  // Bareiss fraction-free elimination.
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < size && a[p][k] == 0) ++p;
      if (p == size) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[size - 1][size - 1];
}

CommonRootReport common_root_check(int d) {
  if (d < 4 || d > 9) throw DomainError("common_root_check: supported for 4 <= d <= 9");
  CommonRootReport r;
  r.d = d;
  r.resultant = sylvester_resultant(dehomogenized_moment(d - 1), dehomogenized_moment(d - 2));
  r.shares_root = r.resultant == 0;
  return r;
}

std::vector<int> eisenstein_witnesses(int k) {
  if (k < 3 || k > 8) throw DomainError("eisenstein_check: supported for 3 <= k <= 8");
  // s^_k(L, 1) in L, leading coefficient first: coefficient of L^(2(top-j)) is u_j.
  const auto u = dehomogenized_moment(k);
  const Integer& lead = u.front();
  const Integer& constant = u.back();
  std::vector<int> out;
  for (int p = 2; p <= constant; ++p) {
    if (!is_prime(static_cast<std::uint64_t>(p))) continue;
    if (lead % p == 0) continue;
    bool all = true;
    for (std::size_t j = 1; j < u.size(); ++j)
      if (u[j] % p != 0) all = false;
    if (all && constant % (p * p) != 0) out.push_back(p);
  }
  return out;
}

std::optional<int> eisenstein_check(int k) {
  const auto w = eisenstein_witnesses(k);
  if (w.empty()) return std::nullopt;
  return w.back();
}

DenseForm<FloatRing> empirical_moment_form(const GaussianParams<FloatRing>& p, int d, std::size_t samples,
                                           std::uint64_t seed) {
  if (samples == 0) throw DomainError("empirical_moment_form: need at least one sample");
  const int n = p.n;
  Eigen::VectorXd mu(n);
  Eigen::MatrixXd sigma(n, n);
  for (int j = 0; j < n; ++j) {
    mu(j) = p.mean[j];
    for (int k = 0; k < n; ++k) sigma(j, k) = p.sigma(j, k);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw DomainError("empirical_moment_form: Sigma is not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();

  const auto exps = MonomialIndexer(n, d).enumerate(d);
  std::vector<double> sums(exps.size(), 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (int j = 0; j < n; ++j) z(j) = normal(rng);
    const Eigen::VectorXd y = mu + chol * z;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      double term = 1.0;
      for (int j = 0; j < n; ++j)
        for (int e = 0; e < exps[i][j]; ++e) term *= y(j);
      sums[i] += term;
    }
  }
  const double dfact = factorial(d).get_d();
  std::vector<double> c(exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) {
    double multinomial = dfact;
    for (int e : exps[i]) multinomial /= factorial(e).get_d();
    c[i] = multinomial * sums[i] / static_cast<double>(samples);
  }
  return DenseForm<FloatRing>(FloatRing{}, n, d, std::move(c));
}

}  // namespace momentlab
