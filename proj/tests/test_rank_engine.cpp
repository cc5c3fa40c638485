#include <doctest.h>

#include <random>

#include "momentlab/errors.hpp"
#include "momentlab/rank_engine.hpp"
#include "oracles.hpp"

using namespace momentlab;

namespace {

Matrix<Rational> random_low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t rank) {
  std::uniform_int_distribution<int> coef(-20, 20);
  Matrix<Rational> a(rows, rank), b(rank, cols), out(rows, cols, Rational(0));
  for (auto& x : a.data) x = coef(rng);
  for (auto& x : b.data) x = coef(rng);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < rank; ++k)
      for (std::size_t j = 0; j < cols; ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

std::vector<std::vector<mpq_class>> rows_of(const Matrix<Rational>& m) {
  std::vector<std::vector<mpq_class>> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
  return out;
}

}  // namespace

TEST_CASE("modular, float and fraction ranks agree on random low-rank matrices") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const std::size_t rows = 5 + rng() % 20, cols = 5 + rng() % 20;
    const std::size_t r = rng() % (std::min(rows, cols) + 1);
    const auto m = random_low_rank(rng, rows, cols, r);
    const auto want = oracle::rank(rows_of(m));
    CHECK(rank_modp(m, 2147483647u) == want);
    CHECK(rank_float(m) == want);
    const auto report = rank_consensus(m);
    CHECK(report.agreed);
    CHECK(report.rank == want);
  }
}

TEST_CASE("kernel basis is annihilated and has the right size") {
  std::mt19937_64 rng(23);
  const auto m = random_low_rank(rng, 8, 12, 5);
  const PrimeField f(2147483629u);
  const auto k = kernel_basis_modp(m, f.modulus());
  CHECK(k.rows == 7);
  const auto mm = reduce_mod(m, f);
  for (std::size_t i = 0; i < k.rows; ++i)
    for (auto x : multiply_modp(mm, k.row(i), f)) CHECK(x == 0);
}

TEST_CASE("a small prime can undershoot; the consensus outvotes it") {
  // Rank 2 over QQ, rank 1 mod 7.
  Matrix<Rational> m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 0;
  m(1, 0) = 0;
  m(1, 1) = 7;
  CHECK(rank_modp(m, 7) == 1);
  CHECK(rank_modp(m, 2147483647u) == 2);
  CHECK(rank_float(m) == 2);

  MatrixSource src = source_of(m);
  const auto honest = src.modular;
  src.modular = [&](const PrimeField& f) {
    auto out = honest(f);
    if (f.modulus() == RankEngine().primes()[0]) out(1, 1) = 0;  // simulate an unlucky prime
    return out;
  };
  const auto report = RankEngine().consensus(src);
  CHECK(report.flagged);
  CHECK_FALSE(report.agreed);
  CHECK(report.rank == 2);
  CHECK(report.engines.size() == 4);
}

TEST_CASE("irreconcilable engines raise") {
  Matrix<Rational> m(3, 3, Rational(0));
  for (int i = 0; i < 3; ++i) m(i, i) = 1;
  MatrixSource src = source_of(m);
  const RankEngine engine;
  src.modular = [&](const PrimeField& f) {
    ModMatrix out(3, 3, 0);
    const auto& p = engine.primes();
    const std::size_t r = f.modulus() == p[0] ? 1 : f.modulus() == p[1] ? 2 : 0;
    for (std::size_t i = 0; i < r; ++i) out(i, i) = 1;
    return out;
  };
  CHECK_THROWS_AS(engine.consensus(src), ConsensusError);
}

TEST_CASE("prime selection is a pure function of the seed") {
  const RankEngine a(1729), b(1729), c(1730);
  CHECK(a.primes() == b.primes());
  CHECK(a.primes() != c.primes());
  CHECK(a.primes().size() == 3);
  CHECK(a.primes()[0] != a.primes()[1]);
  const auto& pool = default_prime_pool();
  CHECK(pool.size() == 100);
  CHECK(pool.front() == 2147483647u);
  for (auto p : pool) CHECK(is_prime(p));
}

TEST_CASE("float rank validates its input") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(rank_float(m, 0.0), DomainError);
  CHECK_THROWS_AS(rank_float(m, 1.5), DomainError);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(rank_float(m), DomainError);
  CHECK(rank_float(Eigen::MatrixXd::Zero(4, 4)) == 0);
  // Badly scaled rows are handled by equilibration.
  Eigen::MatrixXd s(2, 2);
  s << 1e12, 0, 0, 1e-6;
  CHECK(rank_float(s) == 2);
}
