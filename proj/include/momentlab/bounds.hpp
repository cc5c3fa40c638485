#pragma once

// Closed-form thresholds for secant dimensions and identifiability.
// Everything is exact rational arithmetic; floors and ceilings are taken
// only in the returned reports.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momentlab/rings.hpp"

namespace momentlab {

/// C(n+d-1, d): dimension of the space of degree-d forms.
Integer forms_dimension(int n, int d);
/// C(n+1, 2) + n = n(n+3)/2: dimension of GM_d for d >= 4.
Integer gm_variety_dimension(int n);

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);

/// C(n+d-1, d) / (C(n+1,2) + n): the parameter-counting ceiling on m.
Rational param_count_bound(int n, int d);

/// Largest m strictly below the parameter-counting floor, i.e. the rank
/// up to which identifiability is certified from one nondefective run at
/// the floor value.
Integer certified_max_m(int n, int d);

struct NenashevBounds {
  Rational lower;  // ratio - C(n+h-1, h)
  Rational upper;  // ratio + C(n+h-1, h)
};

/// ratio = C(n+a+h-1, a+h) / C(n+h-1, h).
NenashevBounds nenashev_bounds(int n, int a, int h);

struct AhExpected {
  Integer expected_dim;  // min(mn, C(n+d-1, d))
  bool is_exception = false;
};

/// Expected dimension of the degree-d part of an ideal of m generic
/// (d-1)-th powers of linear forms, with the classical exception list.
AhExpected ah_expected(int n, int d, int m);

struct SplittingConstraints {
  Rational c1;  // C(n1+5,6)/C(n1+1,2) - C(n1+1,2)
  Rational c2;  // C(n2+5,6)/n2 - n2
  Integer c1_floor;
  Integer c2_floor;
  /// Closed-form quartic n1^4/360 + 7n1^3/180 + 109n1^2/360 + 13n1/180 + 1/3.
  /// Kept for comparison only: it does not expand from the binomials.
  Rational c1_polynomial;
  /// Closed-form quintic for c2; equal to the binomial expression.
  Rational c2_polynomial;
};

SplittingConstraints splitting_constraints(int n1, int n2);

struct SplitChoice {
  int n1 = 0;
  int n2 = 0;
  Integer m;  // min(floor c1, floor c2) at this split
};

/// Exhaustive over n1 + n2 = n; ties go to the smallest n1.
SplitChoice splitting_optimizer(int n);

struct GenericRankBounds {
  Integer lower;  // ceil(C(n+d-1,d) / (C(n+1,2) + n))
  Integer upper;  // ceil(C(n+d-1,d) / C(n+1,2) + C(n+1,2))
};

GenericRankBounds generic_rank_bounds(int n, int d);

struct MmConditionReport {
  bool identifiable = false;
  bool dimension_condition = false;  // m * dim_gm <= dim_forms - dim_gm
  bool not_1twd = false;
  bool nondefective_m_plus_1 = false;
  std::vector<std::string> reasons;
};

MmConditionReport mm_condition_report(int n, int d, int m, bool nondefective_m_plus_1, bool not_1twd);

struct BoundReport {
  int n = 0;
  int d = 0;
  Integer dim_forms;
  Integer dim_gm;
  Rational param_count_max_m;
  Integer param_count_floor;
  Integer certified_max_m;
  std::optional<int> m;
  /// Only when m is given: m * dim_gm <= dim_forms - dim_gm.
  std::optional<bool> mm_margin;
  /// Only for d >= 5.
  std::optional<GenericRankBounds> generic_rank;
};

BoundReport bound_report(int n, int d, std::optional<int> m = std::nullopt);

}  // namespace momentlab
