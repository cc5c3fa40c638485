#include <doctest.h>

#include <cmath>
#include <random>

#include "momentlab/errors.hpp"
#include "momentlab/moment_forms.hpp"
#include "oracles.hpp"

using namespace momentlab;

namespace {

oracle::Poly to_poly(const DenseForm<RationalField>& f) {
  oracle::Poly p;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (sgn(f[i]) != 0) p[monomial_unrank(i, f.num_vars(), f.degree())] = f[i];
  return p;
}

GaussianParams<RationalField> random_params(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  std::vector<Rational> mu(n), s(tri_size(n));
  for (auto& x : mu) x = Rational(num(rng), den(rng)), x.canonicalize();
  for (auto& x : s) x = Rational(num(rng), den(rng)), x.canonicalize();
  return GaussianParams<RationalField>(RationalField{}, n, mu, s);
}

}  // namespace

TEST_CASE("duonomial coefficients") {
  for (int d = 1; d <= 12; ++d)
    for (int k = 0; 2 * k <= d; ++k) CHECK(moment_coefficient(d, k) == oracle::moment_coefficient(d, k));
  CHECK(duonomial(6, 2) == 180);  // 6!/(2! 2!)
  CHECK_THROWS_AS(duonomial(3, 2), DomainError);
}

TEST_CASE("bivariate table rows") {
  CHECK(bivariate_moment_poly(2).to_string() == "ℓ^2 + q");
  CHECK(bivariate_moment_poly(6).to_string() == "ℓ^6 + 15qℓ^4 + 45q^2ℓ^2 + 15q^3");
  const auto p8 = bivariate_moment_poly(8);
  const std::vector<Rational> want{1, 28, 210, 420, 105};
  CHECK(p8.coeffs == want);
}

TEST_CASE("moment form matches the power series of exp(l + q/2)") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 3; ++n)
    for (int d = 0; d <= 6; ++d) {
      const auto p = random_params(rng, n);
      CHECK(to_poly(moment_form(p, d)) == oracle::exp_moment(to_poly(p.linear_form()), to_poly(p.quadratic_form()), n, d));
    }
}

TEST_CASE("derivative identities") {
  // On the bivariate coefficients: d/dl s_d = d s_{d-1}, d/dq s_d = C(d,2) s_{d-2}.
  for (int d = 2; d <= 9; ++d) {
    const auto s = bivariate_moment_poly(d).coeffs;       // q^k l^(d-2k)
    const auto s1 = bivariate_moment_poly(d - 1).coeffs;
    for (std::size_t k = 0; k < s1.size(); ++k)
      if (d - 2 * static_cast<int>(k) > 0) CHECK(s[k] * (d - 2 * static_cast<int>(k)) == d * s1[k]);
    const auto s2 = bivariate_moment_poly(d - 2).coeffs;
    for (std::size_t k = 1; k < s.size(); ++k)
      CHECK(s[k] * static_cast<int>(k) == Rational(d * (d - 1) / 2) * s2[k - 1]);
  }
}

TEST_CASE("euler recurrence") {
  for (int d = 2; d <= 8; ++d) CHECK(euler_recurrence_check(d, 3));
}

TEST_CASE("gaussian params round trip through forms") {
  std::mt19937_64 rng(9);
  const auto p = random_params(rng, 4);
  const auto back = GaussianParams<RationalField>::from_forms(p.linear_form(), p.quadratic_form());
  CHECK(back.mean == p.mean);
  CHECK(back.quad == p.quad);
  CHECK(tri_index(2, 1, 4) == tri_index(1, 2, 4));
  CHECK(tri_index(3, 3, 4) == tri_size(4) - 1);
}

TEST_CASE("mixture moment is linear in the weights") {
  std::mt19937_64 rng(2);
  MixtureParams<RationalField> mix;
  mix.components.push_back({Rational(1, 3), random_params(rng, 2)});
  mix.components.push_back({Rational(2, 3), random_params(rng, 2)});
  const auto m6 = mixture_moment(mix, 6);
  CHECK(m6 == moment_form(mix.components[0].params, 6).scaled(Rational(1, 3)) +
                  moment_form(mix.components[1].params, 6).scaled(Rational(2, 3)));
  CHECK_THROWS_AS(mixture_moment(MixtureParams<RationalField>{}, 4), DomainError);
}

TEST_CASE("weighted to uniform rescaling keeps the degree-d moments") {
  std::mt19937_64 rng(4);
  MixtureParams<RationalField> mix;
  mix.components.push_back({Rational(1, 8), random_params(rng, 2)});
  mix.components.push_back({Rational(3, 8), random_params(rng, 2)});
  mix.components.push_back({Rational(1, 2), random_params(rng, 2)});
  // m * lambda = 3/8, 9/8, 3/2: cube roots are irrational, so fall back to floats.
  CHECK_FALSE(try_rescale_to_uniform(mix, 3).has_value());
  const auto f = std::get<MixtureParams<FloatRing>>(rescale_to_uniform(mix, 4));
  const auto want = mixture_moment(convert(mix, FloatRing{}), 4);
  const auto got = mixture_moment(f, 4);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  for (const auto& c : f.components) CHECK(c.weight == doctest::Approx(1.0 / 3));

  MixtureParams<RationalField> squares;
  squares.components.push_back({Rational(1, 8), random_params(rng, 2)});
  squares.components.push_back({Rational(7, 8), random_params(rng, 2)});
  CHECK_FALSE(try_rescale_to_uniform(squares, 2).has_value());
  MixtureParams<RationalField> ok;
  ok.components.push_back({Rational(1, 32), random_params(rng, 2)});
  ok.components.push_back({Rational(81, 32), random_params(rng, 2)});
  const auto r = try_rescale_to_uniform(ok, 4);
  REQUIRE(r.has_value());
  CHECK(mixture_moment(*r, 4) == mixture_moment(ok, 4));
  CHECK(r->components[0].weight == Rational(1, 2));
  CHECK(rational_root(Rational(81, 16), 4) == Rational(3, 2));
  CHECK_FALSE(rational_root(Rational(2), 2).has_value());
}

TEST_CASE("resultants agree with the cofactor determinant") {
  for (int d = 4; d <= 7; ++d) {
    const auto f = dehomogenized_moment(d - 1), g = dehomogenized_moment(d - 2);
    CHECK(sylvester_resultant(f, g) == oracle::det(oracle::sylvester(f, g)));
  }
  for (int d = 4; d <= 9; ++d) CHECK_FALSE(common_root_check(d).shares_root);
  // (t - 1)(t - 2) and (t - 1)(t + 3) share a root.
  CHECK(sylvester_resultant({2, -3, 1}, {-3, 2, 1}) == 0);
  CHECK_THROWS_AS(common_root_check(10), DomainError);
}

TEST_CASE("eisenstein witnesses") {
  CHECK(eisenstein_witnesses(6) == std::vector<int>{3, 5});
  CHECK(eisenstein_witnesses(7) == std::vector<int>{3, 7});
  const std::vector<int> want{3, 3, 5, 5, 7, 7};
  for (int k = 3; k <= 8; ++k) CHECK(eisenstein_check(k) == want[k - 3]);
  CHECK_THROWS_AS(eisenstein_check(9), DomainError);
}

TEST_CASE("empirical moments converge to the analytic form") {
  const GaussianParams<FloatRing> p(FloatRing{}, 2, {1.0, 0.5}, {1.0, 0.3, 0.8});
  const auto analytic = moment_form(p, 2);
  const auto emp = empirical_moment_form(p, 2, 200000, 1);
  for (std::size_t i = 0; i < emp.size(); ++i) CHECK(emp[i] == doctest::Approx(analytic[i]).epsilon(0.03));
}
