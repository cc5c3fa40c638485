#include "momentlab/tangent_secant.hpp"

#include <random>

namespace momentlab {

namespace {

// Uniform on [-bound, bound] by rejection, so the stream does not depend on
// the standard library's distribution implementation.
std::int64_t draw(std::mt19937_64& rng, int bound) {
  const std::uint64_t span = 2 * static_cast<std::uint64_t>(bound) + 1;
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return static_cast<std::int64_t>(x % span) - bound;
}

}  // namespace

ParameterSample draw_parameters(std::uint64_t seed, int n, int m, int bound, const std::vector<bool>& mean_mask,
                                const std::vector<bool>& quad_mask) {
  if (bound < 1) throw DomainError("draw_parameters: need B >= 1");
  if (n < 1 || m < 0) throw DomainError("draw_parameters: need n >= 1, m >= 0");
  if (!mean_mask.empty() && static_cast<int>(mean_mask.size()) != n)
    throw DomainError("draw_parameters: mean mask has wrong length");
  if (!quad_mask.empty() && quad_mask.size() != tri_size(n))
    throw DomainError("draw_parameters: Sigma mask has wrong length");
  ParameterSample s{seed, n, m, bound, {}, {}};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < m; ++i) {
    std::vector<std::int64_t> mu(n, 0), sigma(tri_size(n), 0);
    for (int j = 0; j < n; ++j)
      if (mean_mask.empty() || mean_mask[j]) mu[j] = draw(rng, bound);
    for (std::size_t j = 0; j < sigma.size(); ++j)
      if (quad_mask.empty() || quad_mask[j]) sigma[j] = draw(rng, bound);
    s.means.push_back(std::move(mu));
    s.quads.push_back(std::move(sigma));
  }
  return s;
}

std::vector<GaussianParams<RationalField>> sample_params(std::uint64_t seed, int n, int m, int bound) {
  return draw_parameters(seed, n, m, bound).params(RationalField{});
}

}  // namespace momentlab
