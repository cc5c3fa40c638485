#include "momentlab/recovery.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

std::vector<int> degrees_of(const RecoveryProblem& p) {
  std::vector<int> out;
  for (const auto& [d, f] : p.targets) out.push_back(d);
  return out;
}

Eigen::VectorXd stacked_targets(const RecoveryProblem& p) {
  std::size_t len = 0;
  for (const auto& [d, f] : p.targets) len += f.size();
  Eigen::VectorXd out(len);
  std::size_t r = 0;
  for (const auto& [d, f] : p.targets)
    for (std::size_t i = 0; i < f.size(); ++i) out(r++) = f[i];
  return out;
}

std::vector<double> flatten(const MixtureComponent<FloatRing>& c) {
  std::vector<double> v{c.weight};
  v.insert(v.end(), c.params.mean.begin(), c.params.mean.end());
  v.insert(v.end(), c.params.quad.begin(), c.params.quad.end());
  return v;
}

}  // namespace

int RecoveryProblem::num_vars() const {
  if (targets.empty()) throw DomainError("RecoveryProblem: no targets");
  return targets.begin()->second.num_vars();
}

void RecoveryProblem::validate() const {
  if (targets.empty()) throw DomainError("RecoveryProblem: at least one target degree is required");
  if (m < 1) throw DomainError("RecoveryProblem: m must be positive");
  const int n = num_vars();
  for (const auto& [d, f] : targets) {
    if (f.degree() != d) throw DomainError("RecoveryProblem: target keyed by degree " + std::to_string(d) +
                                           " has degree " + std::to_string(f.degree()));
    if (f.num_vars() != n) throw DomainError("RecoveryProblem: targets with different variable counts");
  }
}

RecoveryProblem make_problem(const MixtureParams<FloatRing>& truth, const std::vector<int>& degrees,
                             WeightsMode mode) {
  RecoveryProblem p;
  p.m = static_cast<int>(truth.size());
  p.weights_mode = mode;
  for (int d : degrees) {
    if (!p.targets.emplace(d, mixture_moment(truth, d)).second)
      throw DomainError("make_problem: repeated target degree " + std::to_string(d));
  }
  p.validate();
  return p;
}

std::size_t unknowns_per_component(int n, WeightsMode mode) {
  return static_cast<std::size_t>(n) + tri_size(n) + (mode == WeightsMode::free ? 1 : 0);
}

Eigen::VectorXd pack(const MixtureParams<FloatRing>& mix, WeightsMode mode) {
  const int n = mix.num_vars();
  const std::size_t per = unknowns_per_component(n, mode);
  Eigen::VectorXd x(per * mix.size());
  for (std::size_t i = 0; i < mix.size(); ++i) {
    const auto& c = mix.components[i];
    std::size_t k = i * per;
    for (double v : c.params.mean) x(k++) = v;
    for (double v : c.params.quad) x(k++) = v;
    if (mode == WeightsMode::free) x(k++) = c.weight;
  }
  return x;
}

MixtureParams<FloatRing> unpack(const Eigen::VectorXd& x, int n, int m, WeightsMode mode) {
  const std::size_t per = unknowns_per_component(n, mode);
  if (static_cast<std::size_t>(x.size()) != per * static_cast<std::size_t>(m))
    throw DomainError("unpack: vector length does not match (n, m)");
  MixtureParams<FloatRing> mix;
  for (int i = 0; i < m; ++i) {
    std::size_t k = static_cast<std::size_t>(i) * per;
    std::vector<double> mu(n), s(tri_size(n));
    for (auto& v : mu) v = x(k++);
    for (auto& v : s) v = x(k++);
    const double w = mode == WeightsMode::free ? x(k) : 1.0 / m;
    mix.components.push_back({w, GaussianParams<FloatRing>(FloatRing{}, n, std::move(mu), std::move(s))});
  }
  return mix;
}

Eigen::VectorXd residual(const MixtureParams<FloatRing>& mix, const RecoveryProblem& problem) {
  problem.validate();
  if (static_cast<int>(mix.size()) != problem.m) throw DomainError("residual: component count mismatch");
  if (mix.num_vars() != problem.num_vars()) throw DomainError("residual: variable count mismatch");
  Eigen::VectorXd r = -stacked_targets(problem);
  std::size_t row = 0;
  for (const auto& [d, f] : problem.targets) {
    const auto mom = mixture_moment(mix, d);
    for (std::size_t i = 0; i < mom.size(); ++i) r(row + i) += mom[i];
    row += mom.size();
  }
  return r;
}

Eigen::MatrixXd jacobian(const MixtureParams<FloatRing>& mix, const RecoveryProblem& problem) {
  problem.validate();
  if (static_cast<int>(mix.size()) != problem.m) throw DomainError("jacobian: component count mismatch");
  const auto J = moment_jacobian(mix, degrees_of(problem), problem.weights_mode == WeightsMode::free);
  Eigen::MatrixXd out(J.rows, J.cols);
  for (std::size_t i = 0; i < J.rows; ++i)
    for (std::size_t j = 0; j < J.cols; ++j) out(i, j) = J(i, j);
  return out;
}

RecoveryResult refine(const MixtureParams<FloatRing>& init, const RecoveryProblem& problem,
                      const RefineOptions& opts) {
  problem.validate();
  const int n = problem.num_vars();
  if (static_cast<int>(init.size()) != problem.m || init.num_vars() != n)
    throw DomainError("refine: initialization does not match the problem's (n, m)");

  const double scale = std::max(stacked_targets(problem).norm(), std::numeric_limits<double>::min());
  Eigen::VectorXd x = pack(init, problem.weights_mode);
  auto mix = unpack(x, n, problem.m, problem.weights_mode);
  Eigen::VectorXd r = residual(mix, problem);
  double mu = opts.initial_damping;
  int failures = 0;

  RecoveryResult out;
  while (true) {
    if (r.norm() / scale <= opts.rel_tol) {
      out.converged = true;
      break;
    }
    if (out.iterations >= opts.max_iterations) break;
    ++out.iterations;

    const Eigen::MatrixXd J = jacobian(mix, problem);
    // Marquardt scaling: damp each unknown relative to its column norm.
    Eigen::VectorXd D = J.colwise().norm().transpose();
    for (auto& v : D) v = std::max(v, 1e-12);
    Eigen::MatrixXd A(J.rows() + J.cols(), J.cols());
    A << J, std::sqrt(mu) * D.asDiagonal().toDenseMatrix();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(A.rows());
    b.head(J.rows()) = -r;
    const Eigen::VectorXd step = A.colPivHouseholderQr().solve(b);

    const Eigen::VectorXd x_new = x + step;
    auto mix_new = unpack(x_new, n, problem.m, problem.weights_mode);
    const Eigen::VectorXd r_new = residual(mix_new, problem);
    if (r_new.allFinite() && r_new.norm() < r.norm()) {
      x = x_new;
      mix = std::move(mix_new);
      r = r_new;
      mu *= opts.damping_down;
      failures = 0;
    } else {
      mu *= opts.damping_up;
      if (++failures >= opts.max_failures)
        throw DivergenceError("refine: " + std::to_string(failures) + " consecutive rejected steps at relative residual " +
                              std::to_string(r.norm() / scale));
    }
  }
  out.mixture = std::move(mix);
  out.residual_norm = r.norm();
  return out;
}

Matching match_components(const MixtureParams<FloatRing>& found, const MixtureParams<FloatRing>& truth) {
  if (found.size() != truth.size()) throw DomainError("match_components: component counts differ");
  const std::size_t m = found.size();
  std::vector<std::vector<double>> a, b;
  for (const auto& c : found.components) a.push_back(flatten(c));
  for (const auto& c : truth.components) b.push_back(flatten(c));

  struct Pair {
    double dist;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (a[i].size() != b[j].size()) throw DomainError("match_components: variable counts differ");
      double s = 0;
      for (std::size_t k = 0; k < a[i].size(); ++k) s += (a[i][k] - b[j][k]) * (a[i][k] - b[j][k]);
      pairs.push_back({std::sqrt(s), i, j});
    }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.dist < y.dist; });

  Matching out;
  out.permutation.assign(m, m);
  std::vector<bool> used(m, false);
  for (const auto& p : pairs) {
    if (out.permutation[p.i] != m || used[p.j]) continue;
    out.permutation[p.i] = p.j;
    used[p.j] = true;
    for (std::size_t k = 0; k < a[p.i].size(); ++k)
      out.max_error = std::max(out.max_error, std::abs(a[p.i][k] - b[p.j][k]));
  }
  return out;
}

MixtureComponent<FloatRing> gauge_rescale(const MixtureComponent<FloatRing>& c, double t, int d) {
  if (t == 0.0) throw DomainError("gauge_rescale: t must be nonzero");
  auto out = c;
  for (auto& v : out.params.mean) v *= t;
  for (auto& v : out.params.quad) v *= t * t;
  out.weight = c.weight / std::pow(t, d);
  return out;
}

MixtureParams<FloatRing> random_mixture(int n, int m, std::uint64_t seed, WeightsMode mode) {
  if (n < 1 || m < 1) throw DomainError("random_mixture: need n, m >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  MixtureParams<FloatRing> mix;
  double total = 0;
  for (int i = 0; i < m; ++i) {
    std::vector<double> mu(n);
    for (auto& v : mu) v = unit(rng);
    Eigen::MatrixXd A(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) A(j, k) = unit(rng);
    const Eigen::MatrixXd S = A * A.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    std::vector<double> s;
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) s.push_back(S(j, k));
    const double w = mode == WeightsMode::free ? 1.5 + 0.5 * unit(rng) : 1.0;
    total += w;
    mix.components.push_back({w, GaussianParams<FloatRing>(FloatRing{}, n, std::move(mu), std::move(s))});
  }
  for (auto& c : mix.components) c.weight /= total;
  return mix;
}

GaugeReport gauge_report(int n, int m, std::uint64_t seed, std::uint64_t prime_seed, double tol, int bound) {
  const RationalField qq;
  const auto sample = draw_parameters(seed, n, m, bound);
  std::mt19937_64 rng(seed ^ 0x5851F42D4C957F2DULL);
  std::uniform_int_distribution<int> weight(1, bound);
  MixtureParams<RationalField> free_mix, uniform_mix;
  for (auto& p : sample.params(qq)) {
    free_mix.components.push_back({Rational(weight(rng)), p});
    uniform_mix.components.push_back({Rational(1, m), p});
  }
  const RankEngine engine(prime_seed, tol);
  GaugeReport r;
  r.n = n;
  r.m = m;
  r.agreed = true;
  auto kernel = [&](const MixtureParams<RationalField>& mix, std::vector<int> degrees, bool free_weights) {
    const auto J = moment_jacobian(mix, degrees, free_weights);
    const auto report = engine.consensus(J);
    r.agreed = r.agreed && report.agreed;
    return J.cols - report.rank;
  };
  r.unknowns = unknowns_per_component(n, WeightsMode::free) * static_cast<std::size_t>(m);
  r.kernel_single = kernel(free_mix, {6}, true);
  r.kernel_pair = kernel(free_mix, {4, 6}, true);
  r.kernel_uniform = kernel(uniform_mix, {6}, false);
  return r;
}

MixtureParams<FloatRing> perturb(const MixtureParams<FloatRing>& mix, double eps, std::uint64_t seed,
                                 WeightsMode mode) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-eps, eps);
  Eigen::VectorXd x = pack(mix, mode);
  for (auto& v : x) v += noise(rng);
  auto out = unpack(x, mix.num_vars(), static_cast<int>(mix.size()), mode);
  if (mode == WeightsMode::uniform_fixed)
    for (std::size_t i = 0; i < mix.size(); ++i) out.components[i].weight = mix.components[i].weight;
  return out;
}

}  // namespace momentlab
