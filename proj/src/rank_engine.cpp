#include "momentlab/rank_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

std::string format_tol(double tol) {
  std::ostringstream os;
  os << tol;
  return os.str();
}

// Row echelon form in place. Returns pivot columns; rows [0, rank) hold the
// normalized pivot rows. With `reduce_above` the result is fully reduced.
std::vector<std::size_t> eliminate(ModMatrix& m, const PrimeField& f, bool reduce_above) {
  const std::uint64_t p = f.modulus();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && m(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r) std::swap_ranges(m.row(piv).begin(), m.row(piv).end(), m.row(r).begin());

    auto prow = m.row(r);
    const std::uint32_t inv = f.inv(prow[c]);
    for (std::size_t j = c; j < m.cols; ++j) prow[j] = f.mul(prow[j], inv);

    auto update = [&](std::size_t i) {
      auto row = m.row(i);
      const std::uint32_t factor = row[c];
      if (factor == 0) return;
      const std::uint64_t neg = p - factor;
      for (std::size_t j = c; j < m.cols; ++j)
        row[j] = f.reduce(row[j] + neg * prow[j]);
    };
    for (std::size_t i = r + 1; i < m.rows; ++i) update(i);
    if (reduce_above)
      for (std::size_t i = 0; i < r; ++i) update(i);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

ModMatrix reduce_mod(const Matrix<Rational>& m, const PrimeField& field) {
  ModMatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = field.from_rational(m.data[i]);
  return out;
}

ModMatrix reduce_mod(const Matrix<std::int64_t>& m, const PrimeField& field) {
  ModMatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = field.from_int(m.data[i]);
  return out;
}

Eigen::MatrixXd to_eigen(const Matrix<Rational>& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j).get_d();
  return out;
}

std::size_t rank_modp(ModMatrix m, const PrimeField& field) { return eliminate(m, field, false).size(); }

std::size_t rank_modp(const Matrix<Rational>& m, std::uint32_t p) {
  const PrimeField f(p);
  return rank_modp(reduce_mod(m, f), f);
}

std::size_t rank_modp(const Matrix<std::int64_t>& m, std::uint32_t p) {
  const PrimeField f(p);
  return rank_modp(reduce_mod(m, f), f);
}

ModMatrix kernel_basis_modp(ModMatrix m, const PrimeField& field) {
  const auto pivots = eliminate(m, field, true);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  ModMatrix basis(m.cols - pivots.size(), m.cols, 0);
  std::size_t b = 0;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    auto v = basis.row(b++);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field.neg(m(i, free));
  }
  return basis;
}

ModMatrix kernel_basis_modp(const Matrix<Rational>& m, std::uint32_t p) {
  const PrimeField f(p);
  return kernel_basis_modp(reduce_mod(m, f), f);
}

std::vector<std::uint32_t> multiply_modp(const ModMatrix& m, std::span<const std::uint32_t> v,
                                         const PrimeField& field) {
  if (v.size() != m.cols) throw DomainError("multiply_modp: dimension mismatch");
  std::vector<std::uint32_t> out(m.rows, 0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::uint32_t acc = 0;
    for (std::size_t j = 0; j < m.cols; ++j) acc = field.add(acc, field.mul(m(i, j), v[j]));
    out[i] = acc;
  }
  return out;
}

std::size_t rank_float(Eigen::MatrixXd m, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("rank_float: tolerance must lie in (0, 1)");
  if (!m.allFinite()) throw DomainError("rank_float: non-finite entries");
  if (m.size() == 0) return 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double s = m.row(i).cwiseAbs().maxCoeff();
    if (s > 0) m.row(i) /= s;
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double s = m.col(j).cwiseAbs().maxCoeff();
    if (s > 0) m.col(j) /= s;
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++r;
  return r;
}

std::size_t rank_float(const Matrix<Rational>& m, double tol) { return rank_float(to_eigen(m), tol); }

const std::vector<std::uint32_t>& default_prime_pool() {
  static const std::vector<std::uint32_t> pool = [] {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = (1u << 31) - 1; out.size() < 100; c -= 2)
      if (is_prime(c)) out.push_back(c);
    return out;
  }();
  return pool;
}

MatrixSource source_of(const Matrix<Rational>& m) {
  return MatrixSource{m.rows, m.cols, [&m](const PrimeField& f) { return reduce_mod(m, f); },
                      [&m] { return to_eigen(m); }};
}

RankEngine::RankEngine(std::uint64_t prime_seed, double tol) : prime_seed_(prime_seed), tol_(tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("RankEngine: tolerance must lie in (0, 1)");
  // Partial Fisher-Yates over the pool with rejection-sampled indices.
  std::vector<std::uint32_t> pool = default_prime_pool();
  std::mt19937_64 rng(prime_seed);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::uint64_t span = pool.size() - i;
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    std::swap(pool[i], pool[i + x % span]);
    primes_.push_back(pool[i]);
  }
}

RankReport RankEngine::consensus(const MatrixSource& source) const {
  RankReport report;
  auto run_prime = [&](std::uint32_t p) {
    const PrimeField f(p);
    report.engines.push_back({"modp", std::to_string(p), rank_modp(source.modular(f), f)});
  };
  run_prime(primes_[0]);
  run_prime(primes_[1]);
  report.engines.push_back({"float", format_tol(tol_), rank_float(source.floating(), tol_)});

  const auto& e = report.engines;
  if (e[0].rank == e[1].rank && e[1].rank == e[2].rank) {
    report.rank = e[0].rank;
    report.agreed = true;
    return report;
  }

  run_prime(primes_[2]);
  report.flagged = true;
  std::map<std::size_t, int> votes;
  for (const auto& x : report.engines) ++votes[x.rank];
  int best = 0;
  for (const auto& [rank, count] : votes) best = std::max(best, count);
  if (best < 2) {
    std::ostringstream os;
    os << "rank engines irreconcilable:";
    for (const auto& x : report.engines) os << ' ' << x.engine << '[' << x.parameter << "]=" << x.rank;
    throw ConsensusError(os.str());
  }
  // Ties go to the larger rank: modular ranks can only undershoot.
  for (const auto& [rank, count] : votes)
    if (count == best) report.rank = rank;
  return report;
}

RankReport rank_consensus(const Matrix<Rational>& m, std::uint64_t prime_seed, double tol) {
  return RankEngine(prime_seed, tol).consensus(m);
}

}  // namespace momentlab
