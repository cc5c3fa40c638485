#pragma once

// Matrix rank over prime fields and over doubles, plus a consensus protocol.
//
// rank mod p never exceeds the rational rank. Two random 31-bit primes that
// agree with each other and with the floating-point rank are accepted as
// the exact rank; the chance of both primes failing together is negligible
// at the sizes used here, but this is not a proof.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "momentlab/matrix.hpp"
#include "momentlab/rings.hpp"

namespace momentlab {

using ModMatrix = Matrix<std::uint32_t>;

ModMatrix reduce_mod(const Matrix<Rational>& m, const PrimeField& field);
ModMatrix reduce_mod(const Matrix<std::int64_t>& m, const PrimeField& field);
Eigen::MatrixXd to_eigen(const Matrix<Rational>& m);

/// Rank of an already reduced matrix. Takes the matrix by value; it is
/// overwritten by the elimination.
std::size_t rank_modp(ModMatrix m, const PrimeField& field);
std::size_t rank_modp(const Matrix<Rational>& m, std::uint32_t p);
std::size_t rank_modp(const Matrix<std::int64_t>& m, std::uint32_t p);

/// Right kernel basis over F_p, one basis vector per row
/// ((cols - rank) x cols).
ModMatrix kernel_basis_modp(ModMatrix m, const PrimeField& field);
ModMatrix kernel_basis_modp(const Matrix<Rational>& m, std::uint32_t p);

/// M * v over F_p.
std::vector<std::uint32_t> multiply_modp(const ModMatrix& m, std::span<const std::uint32_t> v, const PrimeField& field);

/// Number of singular values above tol * largest, after scaling rows and
/// columns to unit max-norm (unit scaling leaves the rank unchanged).
std::size_t rank_float(Eigen::MatrixXd m, double tol = 1e-8);
std::size_t rank_float(const Matrix<Rational>& m, double tol = 1e-8);

/// The 100 largest primes below 2^31, descending.
const std::vector<std::uint32_t>& default_prime_pool();

struct EngineRank {
  std::string engine;     // "modp" or "float"
  std::string parameter;  // the prime, or the tolerance
  std::size_t rank = 0;
};

struct RankReport {
  std::size_t rank = 0;
  std::vector<EngineRank> engines;
  /// All engines returned the same rank.
  bool agreed = false;
  /// A third prime was needed and the rank was decided by majority.
  bool flagged = false;
};

/// Source of the same matrix in each representation the engines consume.
struct MatrixSource {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<ModMatrix(const PrimeField&)> modular;
  std::function<Eigen::MatrixXd()> floating;
};

MatrixSource source_of(const Matrix<Rational>& m);

/// Stateless consensus service: the primes it uses are a pure function of
/// the prime seed.
class RankEngine {
 public:
  explicit RankEngine(std::uint64_t prime_seed = 1729, double tol = 1e-8);

  /// The three distinct primes this engine draws (two used up front, the
  /// third only on disagreement).
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  double tolerance() const { return tol_; }

  RankReport consensus(const MatrixSource& source) const;
  RankReport consensus(const Matrix<Rational>& m) const { return consensus(source_of(m)); }

 private:
  std::uint64_t prime_seed_;
  double tol_;
  std::vector<std::uint32_t> primes_;
};

RankReport rank_consensus(const Matrix<Rational>& m, std::uint64_t prime_seed = 1729, double tol = 1e-8);

}  // namespace momentlab
