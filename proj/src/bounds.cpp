#include "momentlab/bounds.hpp"

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

Integer choose(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Rational q(const Integer& num, const Integer& den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

void require_positive(int v, const char* what) {
  if (v < 1) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

Integer forms_dimension(int n, int d) {
  require_positive(n, "n");
  if (d < 0) throw DomainError("d must be nonnegative");
  return choose(n + d - 1, d);
}

Integer gm_variety_dimension(int n) {
  require_positive(n, "n");
  return choose(n + 1, 2) + n;
}

Integer floor_of(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return r;
}

Integer ceil_of(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return r;
}

Rational param_count_bound(int n, int d) { return q(forms_dimension(n, d), gm_variety_dimension(n)); }

Integer certified_max_m(int n, int d) { return floor_of(param_count_bound(n, d)) - 1; }

NenashevBounds nenashev_bounds(int n, int a, int h) {
  require_positive(n, "n");
  require_positive(a, "a");
  require_positive(h, "h");
  const Integer sh = choose(n + h - 1, h);
  const Rational ratio = q(choose(n + a + h - 1, a + h), sh);
  return {ratio - sh, ratio + sh};
}

AhExpected ah_expected(int n, int d, int m) {
  if (n < 2 || d < 2 || m < 2) throw DomainError("ah_expected: need n, d, m >= 2");
  AhExpected r;
  const Integer mn = Integer(m) * n;
  const Integer full = forms_dimension(n, d);
  r.expected_dim = mn < full ? mn : full;
  r.is_exception = (d == 2 && m >= 2 && m <= n - 1) || (n == 3 && d == 4 && m == 5) ||
                   (n == 4 && d == 4 && m == 9) || (n == 5 && d == 3 && m == 7) || (n == 5 && d == 4 && m == 14);
  return r;
}

SplittingConstraints splitting_constraints(int n1, int n2) {
  require_positive(n1, "n1");
  require_positive(n2, "n2");
  SplittingConstraints s;
  const Integer t1 = choose(n1 + 1, 2);
  s.c1 = q(choose(n1 + 5, 6), t1) - t1;
  s.c2 = q(choose(n2 + 5, 6), n2) - n2;
  s.c1_floor = floor_of(s.c1);
  s.c2_floor = floor_of(s.c2);

  const Rational x1(n1), x2(n2);
  s.c1_polynomial = x1 * x1 * x1 * x1 / 360 + Rational(7, 180) * x1 * x1 * x1 + Rational(109, 360) * x1 * x1 +
                 Rational(13, 180) * x1 + Rational(1, 3);
  s.c2_polynomial = x2 * x2 * x2 * x2 * x2 / 720 + x2 * x2 * x2 * x2 / 48 + Rational(17, 144) * x2 * x2 * x2 +
                 Rational(5, 16) * x2 * x2 - Rational(223, 360) * x2 + Rational(1, 6);
  return s;
}

SplitChoice splitting_optimizer(int n) {
  if (n < 2) throw DomainError("splitting_optimizer: need n >= 2");
  SplitChoice best;
  bool have = false;
  for (int n1 = 1; n1 < n; ++n1) {
    const auto s = splitting_constraints(n1, n - n1);
    const Integer m = s.c1_floor < s.c2_floor ? s.c1_floor : s.c2_floor;
    if (!have || m > best.m) {
      best = {n1, n - n1, m};
      have = true;
    }
  }
  return best;
}

GenericRankBounds generic_rank_bounds(int n, int d) {
  if (d < 5) throw DomainError("generic_rank_bounds: need d >= 5");
  const Integer forms = forms_dimension(n, d);
  const Integer t = choose(n + 1, 2);
  return {ceil_of(q(forms, gm_variety_dimension(n))), ceil_of(q(forms, t) + t)};
}

MmConditionReport mm_condition_report(int n, int d, int m, bool nondefective_m_plus_1, bool not_1twd) {
  require_positive(m, "m");
  MmConditionReport r;
  const Integer g = gm_variety_dimension(n);
  const Integer forms = forms_dimension(n, d);
  r.dimension_condition = Integer(m) * g <= forms - g;
  r.not_1twd = not_1twd;
  r.nondefective_m_plus_1 = nondefective_m_plus_1;
  if (!r.dimension_condition)
    r.reasons.push_back("dimension condition fails: " + std::to_string(m) + " * " + g.get_str() + " > " + forms.get_str() +
                        " - " + g.get_str());
  if (!not_1twd) r.reasons.push_back("not certified: 1-tangential weak defectivity is not excluded");
  if (!nondefective_m_plus_1)
    r.reasons.push_back("not certified: secant " + std::to_string(m + 1) + " is not known to be nondefective");
  r.identifiable = r.dimension_condition && not_1twd && nondefective_m_plus_1;
  return r;
}

BoundReport bound_report(int n, int d, std::optional<int> m) {
  BoundReport r;
  r.n = n;
  r.d = d;
  r.dim_forms = forms_dimension(n, d);
  r.dim_gm = gm_variety_dimension(n);
  r.param_count_max_m = param_count_bound(n, d);
  r.param_count_floor = floor_of(r.param_count_max_m);
  r.certified_max_m = r.param_count_floor - 1;
  r.m = m;
  if (m) r.mm_margin = Integer(*m) * r.dim_gm <= r.dim_forms - r.dim_gm;
  if (d >= 5) r.generic_rank = generic_rank_bounds(n, d);
  return r;
}

}  // namespace momentlab
