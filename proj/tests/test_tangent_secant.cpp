#include <doctest.h>

#include "momentlab/errors.hpp"
#include "momentlab/tangent_secant.hpp"
#include "oracles.hpp"

using namespace momentlab;

namespace {

std::vector<std::vector<mpq_class>> rows_of(const Matrix<Rational>& m) {
  std::vector<std::vector<mpq_class>> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
  return out;
}

}  // namespace

TEST_CASE("tangent block shape and rank") {
  const auto p = sample_params(42, 3, 1).front();
  const auto t = tangent_matrix(p, 4);
  CHECK(t.rows.rows == 9);
  CHECK(t.rows.cols == 15);
  CHECK(oracle::rank(rows_of(t.rows)) == 9);
  const auto t2 = tangent_matrix(sample_params(42, 2, 1).front(), 6);
  CHECK(t2.rows.rows == 5);
  CHECK(oracle::rank(rows_of(t2.rows)) == 5);
  CHECK_THROWS_AS(tangent_matrix(p, 2), DomainError);
}

TEST_CASE("tangent rows are s_{d-1} X_j then s_{d-2} X_j X_k") {
  const RationalField qq;
  const auto p = sample_params(7, 2, 1).front();
  const auto t = tangent_matrix(p, 5);
  const auto s4 = moment_form(p, 4), s3 = moment_form(p, 3);
  const auto x0 = DenseForm<RationalField>::variable(qq, 2, 0), x1 = DenseForm<RationalField>::variable(qq, 2, 1);
  const std::vector<DenseForm<RationalField>> want{multiply(s4, x0), multiply(s4, x1), multiply(s3, multiply(x0, x0)),
                                                    multiply(s3, multiply(x0, x1)), multiply(s3, multiply(x1, x1))};
  for (std::size_t r = 0; r < want.size(); ++r)
    CHECK(std::vector<Rational>(t.rows.row(r).begin(), t.rows.row(r).end()) == want[r].coeffs());
}

TEST_CASE("secant ranks against fraction elimination") {
  struct Case {
    int n, d, m;
    std::size_t rank;
  };
  for (const auto& c : {Case{3, 6, 3, 27}, Case{3, 5, 2, 18}, Case{4, 4, 2, 27}, Case{2, 5, 1, 5}}) {
    const auto s = secant_matrix(sample_params(42, c.n, c.m), c.d);
    CHECK(s.rows.rows == c.m * gm_dimension(c.n));
    CHECK(oracle::rank(rows_of(s.rows)) == c.rank);
  }
}

TEST_CASE("worker count does not change the secant matrix") {
  const auto samples = sample_params(3, 3, 5);
  const auto a = secant_matrix(samples, 5, 1);
  const auto b = secant_matrix(samples, 5, 4);
  CHECK(a.rows.data == b.rows.data);
}

TEST_CASE("differential is the directional derivative") {
  const RationalField qq;
  const auto p = sample_params(8, 2, 1).front();
  const auto a = DenseForm<RationalField>::variable(qq, 2, 1).scaled(Rational(3));
  const auto x0 = DenseForm<RationalField>::variable(qq, 2, 0);
  const auto b = multiply(x0, x0).scaled(Rational(-2));
  const int d = 5;
  const auto l = p.linear_form(), q = p.quadratic_form();
  // f(t) = s_d(l + t a, q + t b) has degree 5 in t, so its symmetric
  // difference quotient is f'(0) + c h^2 + c' h^4; two Richardson steps are exact.
  auto f = [&](const Rational& t) { return moment_form(l + a.scaled(t), q + b.scaled(t), d); };
  auto sym = [&](const Rational& h) { return (f(h) - f(-h)).scaled(Rational(1) / (2 * h)); };
  const Rational h(1, 10);
  const auto d1 = sym(h), d2 = sym(h / 2), d3 = sym(h / 4);
  const auto r1 = (d2.scaled(Rational(4)) - d1).scaled(Rational(1, 3));
  const auto r2 = (d3.scaled(Rational(4)) - d2).scaled(Rational(1, 3));
  const auto exact = (r2.scaled(Rational(16)) - r1).scaled(Rational(1, 15));
  CHECK(exact == differential(p, d, a, b));
}

TEST_CASE("parameter draws are reproducible and respect masks") {
  const auto a = draw_parameters(5, 3, 2, 10), b = draw_parameters(5, 3, 2, 10);
  CHECK(a.means == b.means);
  CHECK(a.quads == b.quads);
  for (const auto& v : a.means)
    for (auto x : v) CHECK(std::abs(x) <= 10);
  std::vector<bool> mean_mask{false, false, true};
  std::vector<bool> quad_mask(tri_size(3), false);
  quad_mask[0] = true;
  const auto c = draw_parameters(5, 3, 2, 10, mean_mask, quad_mask);
  for (int i = 0; i < 2; ++i) {
    CHECK(c.means[i][0] == 0);
    CHECK(c.means[i][1] == 0);
    for (std::size_t k = 1; k < tri_size(3); ++k) CHECK(c.quads[i][k] == 0);
  }
}
