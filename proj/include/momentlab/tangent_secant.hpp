#pragma once

// Tangent spaces of the Gaussian moment variety and their sums.
//
// At (l, q) the tangent space of GM_d is spanned by s_{d-1}(l,q) X_j and
// s_{d-2}(l,q) X_j X_k (j <= k). Stacking the generator rows of m points
// gives the secant matrix, whose rank is the dimension of the m-th secant.

#include <cstdint>
#include <future>
#include <vector>

#include "momentlab/matrix.hpp"
#include "momentlab/moment_forms.hpp"

namespace momentlab {

/// n + n(n+1)/2.
inline std::size_t gm_dimension(int n) { return static_cast<std::size_t>(n) + tri_size(n); }

template <Ring R>
struct TangentBlock {
  GaussianParams<R> params;
  int d = 0;
  /// (n + n(n+1)/2) x C(n+d-1, d): the X_j rows, then the X_j X_k rows.
  Matrix<typename R::value_type> rows;
};

template <Ring R>
struct SecantMatrix {
  int n = 0;
  int d = 0;
  std::size_t blocks = 0;
  Matrix<typename R::value_type> rows;

  std::size_t block_rows() const { return gm_dimension(n); }
};

namespace detail {

/// Writes f times the monomial with suffix sums `shift_suffix` into `out`.
template <Ring R>
void shifted_into(const DenseForm<R>& f, const MonomialIndexer& idx, std::span<const int> shift_suffix,
                  const std::vector<std::vector<int>>& f_suffix, std::span<typename R::value_type> out) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.ring().is_zero(f[i])) continue;
    out[idx.rank_of_sum(f_suffix[i], shift_suffix)] = f[i];
  }
}

}  // namespace detail

template <Ring R>
TangentBlock<R> tangent_matrix(const GaussianParams<R>& p, int d) {
  if (d < 3) throw DomainError("tangent_matrix: need d >= 3");
  const R& ring = p.ring;
  const int n = p.n;
  const auto l = p.linear_form();
  const auto q = p.quadratic_form();
  const auto s1 = moment_form(l, q, d - 1);
  const auto s2 = moment_form(l, q, d - 2);
  const MonomialIndexer idx(n, d);
  auto suffixes = [&](const DenseForm<R>& f) {
    std::vector<std::vector<int>> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = idx.suffix_sums(monomial_unrank(i, n, f.degree()));
    return out;
  };
  const auto t1 = suffixes(s1);
  const auto t2 = suffixes(s2);

  TangentBlock<R> block{p, d, Matrix<typename R::value_type>(gm_dimension(n), monomial_count(n, d), ring.zero())};
  std::size_t r = 0;
  for (int j = 0; j < n; ++j, ++r) {
    ExponentVector e(n, 0);
    e[j] = 1;
    detail::shifted_into(s1, idx, idx.suffix_sums(e), t1, block.rows.row(r));
  }
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k, ++r) {
      ExponentVector e(n, 0);
      ++e[j];
      ++e[k];
      detail::shifted_into(s2, idx, idx.suffix_sums(e), t2, block.rows.row(r));
    }
  return block;
}

/// Stacks tangent blocks in sample order. With workers > 1 the blocks are
/// assembled concurrently; the result does not depend on the worker count.
template <Ring R>
SecantMatrix<R> secant_matrix(const std::vector<GaussianParams<R>>& samples, int d, unsigned workers = 1) {
  if (samples.empty()) throw DomainError("secant_matrix: need at least one sample");
  const auto& first = samples.front();
  for (const auto& s : samples) {
    if (!(s.ring == first.ring)) throw RingMismatch("secant_matrix: samples over different rings");
    if (s.n != first.n) throw DomainError("secant_matrix: samples with different variable counts");
  }
  const int n = first.n;
  const std::size_t br = gm_dimension(n);
  SecantMatrix<R> out{n, d, samples.size(),
                      Matrix<typename R::value_type>(br * samples.size(), monomial_count(n, d), first.ring.zero())};
  auto place = [&](std::size_t i) {
    const auto block = tangent_matrix(samples[i], d);
    std::copy(block.rows.data.begin(), block.rows.data.end(),
              out.rows.data.begin() + static_cast<std::ptrdiff_t>(i * br * out.rows.cols));
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < samples.size(); ++i) place(i);
  } else {
    for (std::size_t start = 0; start < samples.size(); start += workers) {
      std::vector<std::future<void>> jobs;
      for (std::size_t i = start; i < std::min(samples.size(), start + workers); ++i)
        jobs.push_back(std::async(std::launch::async, place, i));
      for (auto& j : jobs) j.get();
    }
  }
  return out;
}

/// Directional derivative of (l, q) -> s_d(l, q) in direction (a, b):
/// d s_{d-1} a + d(d-1)/2 s_{d-2} b.
template <Ring R>
DenseForm<R> differential(const GaussianParams<R>& p, int d, const DenseForm<R>& a, const DenseForm<R>& b) {
  if (d < 1) throw DomainError("differential: need d >= 1");
  const auto l = p.linear_form();
  const auto q = p.quadratic_form();
  l.check_compatible(a, false);
  l.check_compatible(b, false);
  if (a.degree() != 1 || b.degree() != 2) throw DomainError("differential: direction must be (linear, quadratic)");
  const R& ring = p.ring;
  auto result = multiply(moment_form(l, q, d - 1), a).scaled(ring.from_int(d));
  if (d >= 2)
    result = result + multiply(moment_form(l, q, d - 2), b).scaled(ring.from_int(static_cast<std::int64_t>(d) * (d - 1) / 2));
  return result;
}

/// Integer parameter draws, uniform on [-B, B]. Reproducible from the seed
/// alone; the same draws feed every ring.
struct ParameterSample {
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  int bound = 0;
  std::vector<std::vector<std::int64_t>> means;
  std::vector<std::vector<std::int64_t>> quads;

  template <Ring R>
  std::vector<GaussianParams<R>> params(const R& ring) const {
    std::vector<GaussianParams<R>> out;
    for (int i = 0; i < m; ++i) {
      std::vector<typename R::value_type> mu, s;
      for (auto v : means[i]) mu.push_back(ring.from_int(v));
      for (auto v : quads[i]) s.push_back(ring.from_int(v));
      out.emplace_back(ring, n, std::move(mu), std::move(s));
    }
    return out;
  }
};

/// Masks restrict which mean / Sigma entries are drawn (others are zero).
/// Empty masks mean "all entries".
ParameterSample draw_parameters(std::uint64_t seed, int n, int m, int bound,
                                const std::vector<bool>& mean_mask = {}, const std::vector<bool>& quad_mask = {});

std::vector<GaussianParams<RationalField>> sample_params(std::uint64_t seed, int n, int m, int bound = 10);

}  // namespace momentlab
