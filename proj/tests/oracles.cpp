#include "oracles.hpp"

#include <algorithm>
#include <numeric>

namespace oracle {

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [e, c] : b) out[e] += c;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

Poly scale(const Poly& a, const mpq_class& c) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [e, v] : a) out[e] = v * c;
  return out;
}

Poly exp_moment(const Poly& l, const Poly& q, int n, int d) {
  const Poly base = add(l, scale(q, mpq_class(1, 2)));
  Poly power{{std::vector<int>(n, 0), 1}};
  Poly total;
  mpz_class fact = 1;
  for (int k = 0; k <= d; ++k) {
    if (k > 0) {
      power = mul(power, base);
      fact *= k;
    }
    for (const auto& [e, c] : power)
      if (std::accumulate(e.begin(), e.end(), 0) == d) total[e] += c / mpq_class(fact);
  }
  mpz_class dfact = 1;
  for (int i = 2; i <= d; ++i) dfact *= i;
  std::erase_if(total, [](const auto& kv) { return kv.second == 0; });
  return scale(total, mpq_class(dfact));
}

std::size_t rank(std::vector<std::vector<mpq_class>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

mpz_class det(const std::vector<std::vector<mpz_class>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  mpz_class total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[i][j]);
      minor.push_back(row);
    }
    const mpz_class term = m[0][c] * det(minor);
    total += c % 2 == 0 ? term : mpz_class(-term);
  }
  return total;
}

std::vector<std::vector<mpz_class>> sylvester(const std::vector<mpz_class>& f, const std::vector<mpz_class>& g) {
  const std::size_t df = f.size() - 1, dg = g.size() - 1, size = df + dg;
  std::vector<std::vector<mpz_class>> s(size, std::vector<mpz_class>(size, 0));
  for (std::size_t i = 0; i < dg; ++i)
    for (std::size_t k = 0; k <= df; ++k) s[i][i + k] = f[df - k];
  for (std::size_t i = 0; i < df; ++i)
    for (std::size_t k = 0; k <= dg; ++k) s[dg + i][i + k] = g[dg - k];
  return s;
}

mpz_class moment_coefficient(int d, int k) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), d, 2 * k);
  for (int j = 2 * k - 1; j > 1; j -= 2) c *= j;
  return c;
}

}  // namespace oracle
