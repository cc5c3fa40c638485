#pragma once

// Local parameter recovery from exact moment forms.
//
// Unknowns per component: mean entries, the upper triangle of Sigma, and
// the weight when weights are free. With uniform-fixed weights every
// lambda_i is 1/m. Single-degree targets leave one gauge direction per
// component free, (lambda, mu, Sigma) -> (lambda t^-d, t mu, t^2 Sigma).

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "momentlab/matrix.hpp"
#include "momentlab/rank_engine.hpp"
#include "momentlab/tangent_secant.hpp"

namespace momentlab {

enum class WeightsMode { uniform_fixed, free };

struct RecoveryProblem {
  std::map<int, DenseForm<FloatRing>> targets;  // degree -> target form
  int m = 0;
  WeightsMode weights_mode = WeightsMode::uniform_fixed;

  int num_vars() const;
  /// Checks the invariants: at least one target, consistent n, degree key matches.
  void validate() const;
};

/// Builds targets from a known mixture (exact moments, evaluated in doubles).
RecoveryProblem make_problem(const MixtureParams<FloatRing>& truth, const std::vector<int>& degrees,
                             WeightsMode mode);

struct RefineOptions {
  double rel_tol = 1e-12;
  int max_iterations = 200;
  double initial_damping = 1e-3;
  double damping_down = 0.5;
  double damping_up = 4.0;
  /// Consecutive rejected steps that count as divergence.
  int max_failures = 10;
};

struct RecoveryResult {
  MixtureParams<FloatRing> mixture;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double matched_error = -1.0;  // set once compared against a truth
};

struct Matching {
  std::vector<std::size_t> permutation;  // permutation[i] = truth index matched to found[i]
  double max_error = 0.0;
};

/// Number of unknowns per component.
std::size_t unknowns_per_component(int n, WeightsMode mode);

/// Flattened unknowns in Jacobian column order.
Eigen::VectorXd pack(const MixtureParams<FloatRing>& mix, WeightsMode mode);
MixtureParams<FloatRing> unpack(const Eigen::VectorXd& x, int n, int m, WeightsMode mode);

Eigen::VectorXd residual(const MixtureParams<FloatRing>& mix, const RecoveryProblem& problem);

/// Analytic Jacobian of the stacked moment coefficients, over any ring.
/// Columns per component: mean entries, Sigma upper triangle, then the
/// weight when `free_weights`.
template <Ring R>
Matrix<typename R::value_type> moment_jacobian(const MixtureParams<R>& mix, const std::vector<int>& degrees,
                                               bool free_weights) {
  if (mix.components.empty()) throw DomainError("moment_jacobian: empty mixture");
  if (degrees.empty()) throw DomainError("moment_jacobian: no target degrees");
  const int n = mix.num_vars();
  const R& ring = mix.components.front().params.ring;
  std::size_t rows = 0;
  for (int d : degrees) rows += monomial_count(n, d);
  const std::size_t per = static_cast<std::size_t>(n) + tri_size(n) + (free_weights ? 1 : 0);
  Matrix<typename R::value_type> J(rows, per * mix.size(), ring.zero());

  std::vector<DenseForm<R>> dirs_a, dirs_b;
  const DenseForm<R> zero1(ring, n, 1), zero2(ring, n, 2);
  for (int j = 0; j < n; ++j) {
    dirs_a.push_back(DenseForm<R>::variable(ring, n, j));
    dirs_b.push_back(zero2);
  }
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      const auto xj = DenseForm<R>::variable(ring, n, j);
      const auto xk = DenseForm<R>::variable(ring, n, k);
      dirs_a.push_back(zero1);
      dirs_b.push_back(multiply(xj, xk).scaled(std::int64_t{j == k ? 1 : 2}));
    }

  std::size_t row0 = 0;
  for (int d : degrees) {
    for (std::size_t i = 0; i < mix.size(); ++i) {
      const auto& c = mix.components[i];
      const std::size_t col0 = i * per;
      for (std::size_t t = 0; t < dirs_a.size(); ++t) {
        const auto col = differential(c.params, d, dirs_a[t], dirs_b[t]).scaled(c.weight);
        for (std::size_t r = 0; r < col.size(); ++r) J(row0 + r, col0 + t) = col[r];
      }
      if (free_weights) {
        const auto s = moment_form(c.params, d);
        for (std::size_t r = 0; r < s.size(); ++r) J(row0 + r, col0 + dirs_a.size()) = s[r];
      }
    }
    row0 += monomial_count(n, d);
  }
  return J;
}

Eigen::MatrixXd jacobian(const MixtureParams<FloatRing>& mix, const RecoveryProblem& problem);

/// Levenberg-Marquardt on the moment residual. Throws DivergenceError after
/// `max_failures` consecutive rejected steps.
RecoveryResult refine(const MixtureParams<FloatRing>& init, const RecoveryProblem& problem,
                      const RefineOptions& opts = {});

/// Greedy global nearest pairs on (lambda, mu, vec Sigma).
Matching match_components(const MixtureParams<FloatRing>& found, const MixtureParams<FloatRing>& truth);

/// Moves one component along the degree-d gauge by t.
MixtureComponent<FloatRing> gauge_rescale(const MixtureComponent<FloatRing>& c, double t, int d);

/// Well-conditioned random truth: means in [-1, 1], Sigma = A A^T + I/2 with
/// A entries in [-1, 1]. Uniform weights, or random positive weights summing
/// to one in free mode.
MixtureParams<FloatRing> random_mixture(int n, int m, std::uint64_t seed, WeightsMode mode);

struct GaugeReport {
  int n = 0;
  int m = 0;
  std::size_t unknowns = 0;          // free-weight columns
  std::size_t kernel_single = 0;     // degree 6 alone
  std::size_t kernel_pair = 0;       // degrees 4 and 6
  std::size_t kernel_uniform = 0;    // degree 6, uniform fixed weights
  bool agreed = false;               // every rank came from an agreeing consensus
};

/// Exact Jacobian kernel dimensions at an integer truth drawn from `seed`
/// (weights drawn from 1..bound), ranked by the consensus engine.
GaugeReport gauge_report(int n, int m, std::uint64_t seed, std::uint64_t prime_seed = 1729, double tol = 1e-8,
                         int bound = 10);

/// Adds independent uniform noise in [-eps, eps] to every unknown.
MixtureParams<FloatRing> perturb(const MixtureParams<FloatRing>& mix, double eps, std::uint64_t seed,
                                 WeightsMode mode);

}  // namespace momentlab
