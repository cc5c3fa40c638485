#include "momentlab/monomial.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "momentlab/errors.hpp"

namespace momentlab {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw DomainError("binomial(" + std::to_string(n) + "," + std::to_string(k) + ") overflows");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t monomial_count(int n, int d) {
  if (n < 1 || d < 0) throw DomainError("monomial_count: need n >= 1, d >= 0");
  return binomial(static_cast<std::uint64_t>(n + d - 1), static_cast<std::uint64_t>(d));
}

std::uint64_t monomial_rank(std::span<const int> e, int d) {
  if (e.empty()) throw DomainError("monomial_rank: empty exponent vector");
  const int n = static_cast<int>(e.size());
  long total = 0;
  for (int x : e) {
    if (x < 0) throw DomainError("monomial_rank: negative exponent");
    total += x;
  }
  if (total != d)
    throw DomainError("monomial_rank: exponents sum to " + std::to_string(total) +
                      ", expected degree " + std::to_string(d));
  std::uint64_t r = 0;
  int t = 0;
  for (int i = 1; i < n; ++i) {
    t += e[n - i];
    r += binomial(static_cast<std::uint64_t>(t + i - 1), static_cast<std::uint64_t>(i));
  }
  return r;
}

ExponentVector monomial_unrank(std::uint64_t index, int n, int d) {
  const std::uint64_t count = monomial_count(n, d);
  if (index >= count)
    throw DomainError("monomial_unrank: index " + std::to_string(index) + " out of range for C(" +
                      std::to_string(n + d - 1) + "," + std::to_string(d) + ")");
  ExponentVector e(n, 0);
  std::uint64_t r = index;
  // t[i] = sum of the last i exponents, t[0] = 0.
  std::vector<int> t(n, 0);
  for (int i = n - 1; i >= 1; --i) {
    std::uint64_t b = static_cast<std::uint64_t>(i - 1);
    while (binomial(b + 1, i) <= r) ++b;
    r -= binomial(b, i);
    t[i] = static_cast<int>(b) - i + 1;
  }
  for (int i = 1; i < n; ++i) e[n - i] = t[i] - t[i - 1];
  e[0] = d - t[n - 1];
  return e;
}

MonomialIndexer::MonomialIndexer(int n, int max_degree)
    : n_(n), max_top_(n + max_degree), table_(static_cast<std::size_t>(max_top_ + 1) * (n + 1), 0) {
  if (n < 1 || max_degree < 0) throw DomainError("MonomialIndexer: need n >= 1, degree >= 0");
  for (int top = 0; top <= max_top_; ++top)
    for (int k = 0; k <= n && k <= top; ++k)
      table_[top * (n_ + 1) + k] = binomial(static_cast<std::uint64_t>(top), static_cast<std::uint64_t>(k));
}

std::vector<int> MonomialIndexer::suffix_sums(std::span<const int> e) const {
  std::vector<int> t(n_, 0);
  for (int i = 1; i < n_; ++i) t[i] = t[i - 1] + e[n_ - i];
  return t;
}

std::uint64_t MonomialIndexer::rank_of_sum(std::span<const int> ta, std::span<const int> tb) const {
  std::uint64_t r = 0;
  for (int i = 1; i < n_; ++i) r += choose(ta[i] + tb[i] + i - 1, i);
  return r;
}

std::vector<ExponentVector> MonomialIndexer::enumerate(int d) const {
  const std::uint64_t count = monomial_count(n_, d);
  std::vector<ExponentVector> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(monomial_unrank(i, n_, d));
  return out;
}

}  // namespace momentlab
