#include <doctest.h>

#include "momentlab/errors.hpp"
#include "momentlab/experiments.hpp"

using namespace momentlab;

TEST_CASE("secant dimensions") {
  struct Case {
    int n, d, m;
    std::size_t dim, expected;
  };
  for (const auto& c : {Case{3, 6, 3, 27, 27}, Case{4, 6, 6, 84, 84}, Case{3, 5, 2, 18, 18}, Case{4, 4, 2, 27, 28}}) {
    const auto r = secant_dimension(c.n, c.d, c.m, 42);
    CHECK(r.secant_dimension == c.dim);
    CHECK(r.expected_dimension == c.expected);
    CHECK(r.defect == c.expected - c.dim);
    CHECK(r.engine_report.agreed);
    CHECK(r.engine_report.engines.size() == 3);
  }
  CHECK_THROWS_AS(secant_dimension(3, 3, 2, 42), DomainError);
}

TEST_CASE("parameter-counting rank") {
  CHECK(parameter_count_rank(2, 5) == 1);
  CHECK(parameter_count_rank(8, 5) == 18);
  CHECK(parameter_count_rank(6, 5) == 9);
  CHECK(parameter_count_rank(6, 6) == 17);
  CHECK(expected_secant_dimension(3, 4, 2) == 15);
}

TEST_CASE("max-rank scan is nondefective at d = 5") {
  const auto rows = max_rank_scan({2, 3, 4, 5}, 5, 42);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.defect == 0);
  CHECK_THROWS_AS(max_rank_scan({3}, 9, 42), DomainError);
}

TEST_CASE("koszul defect") {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{3, 1}, {4, 2}, {5, 3}}) {
    const auto r = koszul_defect_check(n, m, 42);
    CHECK(r.defect == static_cast<std::size_t>(m * (m - 1) / 2));
    CHECK(r.koszul_vectors_in_kernel);
    CHECK(r.koszul_rank == r.koszul_vectors);
    CHECK(r.matches_choose2);
  }
  CHECK_THROWS_AS(koszul_defect_check(3, 2, 42), DomainError);  // filling
}

TEST_CASE("koszul vector has the stated block structure") {
  const auto samples = sample_params(1, 3, 3);
  const auto v = koszul_vector(samples, 0, 2);
  const std::size_t br = gm_dimension(3);
  REQUIRE(v.size() == 3 * br);
  for (std::size_t r = 0; r < 3; ++r) CHECK(sgn(v[r]) == 0);           // no X_j rows
  for (std::size_t r = br; r < 2 * br; ++r) CHECK(sgn(v[r]) == 0);     // block 1 untouched
  CHECK_THROWS_AS(koszul_vector(samples, 1, 1), DomainError);
}

TEST_CASE("split skewness") {
  const auto r = split_skewness(3, 3, 2, 6, 42);
  CHECK(r.full == 54);
  CHECK(r.full_rank);
  CHECK(r.beyond_constraints);
  const auto inside = split_skewness(7, 3, 5, 6, 42);
  CHECK_FALSE(inside.beyond_constraints);
  CHECK(inside.full_rank);
}

TEST_CASE("contact kernel") {
  for (int d = 5; d <= 8; ++d) {
    const auto r = contact_kernel(2, d);
    CHECK(r.min_kernel_dim == 1);
    CHECK(r.certified);
    CHECK(r.euler_in_kernel);
  }
  CHECK(contact_kernel(3, 5).min_kernel_dim == 1);
  CHECK(contact_kernel(3, 6).min_kernel_dim == 1);
  const auto low = contact_kernel(2, 4, 2, 42, {}, true);
  CHECK(low.min_kernel_dim == 5);
  CHECK_FALSE(low.certified);
  CHECK_THROWS_AS(contact_kernel(2, 4), DomainError);
}

TEST_CASE("csv schema round trip") {
  std::vector<ExperimentRecord> records{secant_dimension(2, 5, 1, 42), secant_dimension(3, 5, 2, 42)};
  const auto text = to_csv(records);
  CHECK(text.rfind("n,rank,secant dimension,expected dimension\n", 0) == 0);
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].n == 3);
  CHECK(rows[1].rank == 2);
  CHECK(rows[1].secant_dimension == 18);
  CHECK(rows[1].expected_dimension == 18);
  CHECK_THROWS_AS(parse_csv("n,m\n1,2\n"), DomainError);
}

TEST_CASE("json records carry seeds and engine reports") {
  const auto j = to_json(secant_dimension(3, 5, 2, 42));
  CHECK(j["seed"] == 42);
  CHECK(j["engine_report"]["agreed"] == true);
  CHECK(j["engine_report"]["engines"].size() == 3);
}

TEST_CASE("retry seeds are distinct") {
  CHECK(retry_seed(42, 0) == 42);
  CHECK(retry_seed(42, 1) != retry_seed(42, 2));
}
