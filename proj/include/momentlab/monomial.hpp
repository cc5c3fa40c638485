#pragma once

// Graded colexicographic indexing of degree-d monomials in n variables.
//
// An exponent vector e = (e_1..e_n) is mapped to the (n-1)-subset
// b_i = t_i + i - 1 of {0, ..., n+d-2}, where t_i = e_{n-i+1} + ... + e_n is
// the sum of the last i exponents, and ranked by the combinatorial number
// system: rank(e) = sum_i C(b_i, i). The pure power X_1^d has rank 0.

#include <cstdint>
#include <span>
#include <vector>

namespace momentlab {

using ExponentVector = std::vector<int>;

/// Exact binomial coefficient; throws DomainError on 64-bit overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Number of degree-d monomials in n variables, C(n+d-1, d).
std::uint64_t monomial_count(int n, int d);

/// Throws DomainError if e does not have n entries summing to d.
std::uint64_t monomial_rank(std::span<const int> e, int d);
ExponentVector monomial_unrank(std::uint64_t index, int n, int d);

/// Pascal table sized for ranking monomials up to (n, d); rank lookups
/// without recomputing binomials. Immutable after construction.
class MonomialIndexer {
 public:
  MonomialIndexer(int n, int max_degree);

  int num_vars() const { return n_; }
  std::uint64_t choose(int top, int k) const { return table_[top * (n_ + 1) + k]; }

  /// Suffix sums t_1..t_{n-1} (t_i = sum of the last i exponents).
  std::vector<int> suffix_sums(std::span<const int> e) const;
  /// Rank from precomputed suffix sums of two factors, added termwise.
  std::uint64_t rank_of_sum(std::span<const int> ta, std::span<const int> tb) const;
  /// All exponent vectors of degree d, in rank order.
  std::vector<ExponentVector> enumerate(int d) const;

 private:
  int n_;
  int max_top_;
  std::vector<std::uint64_t> table_;
};

}  // namespace momentlab
