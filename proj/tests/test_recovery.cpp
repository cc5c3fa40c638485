#include <doctest.h>

#include "momentlab/errors.hpp"
#include "momentlab/recovery.hpp"

using namespace momentlab;

TEST_CASE("residual vanishes at the truth") {
  const auto truth = random_mixture(3, 2, 1, WeightsMode::free);
  const auto p = make_problem(truth, {4, 6}, WeightsMode::free);
  CHECK(residual(truth, p).norm() < 1e-12);
  CHECK_THROWS_AS(make_problem(truth, {6, 6}, WeightsMode::free), DomainError);
  CHECK_THROWS_AS(make_problem(truth, {}, WeightsMode::free), DomainError);
}

TEST_CASE("the degree-d gauge is invisible to degree d only") {
  const auto truth = random_mixture(3, 2, 2, WeightsMode::free);
  auto moved = truth;
  moved.components[0] = gauge_rescale(truth.components[0], 1.3, 6);
  CHECK(residual(moved, make_problem(truth, {6}, WeightsMode::free)).norm() < 1e-9);
  CHECK(residual(moved, make_problem(truth, {4, 6}, WeightsMode::free)).norm() > 1e-3);
}

TEST_CASE("analytic jacobian matches central differences") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const auto truth = random_mixture(3, 2, seed, WeightsMode::free);
    const auto p = make_problem(truth, {4, 6}, WeightsMode::free);
    const auto at = random_mixture(3, 2, seed + 100, WeightsMode::free);
    const Eigen::MatrixXd J = jacobian(at, p);
    const Eigen::VectorXd x = pack(at, WeightsMode::free);
    const double h = 1e-7;
    for (Eigen::Index c = 0; c < x.size(); ++c) {
      Eigen::VectorXd xp = x, xm = x;
      xp(c) += h;
      xm(c) -= h;
      const Eigen::VectorXd fd =
          (residual(unpack(xp, 3, 2, WeightsMode::free), p) - residual(unpack(xm, 3, 2, WeightsMode::free), p)) /
          (2 * h);
      CHECK((fd - J.col(c)).norm() / J.col(c).norm() <= 1e-6);
    }
  }
}

TEST_CASE("exact jacobian kernel dimensions") {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{3, 2}, {4, 3}}) {
    const auto g = gauge_report(n, m, 42);
    CHECK(g.agreed);
    CHECK(g.kernel_single == static_cast<std::size_t>(m));
    CHECK(g.kernel_pair == 0);
    CHECK(g.kernel_uniform == 0);
  }
}

TEST_CASE("refine from the truth stops immediately") {
  const auto truth = random_mixture(3, 2, 42, WeightsMode::uniform_fixed);
  const auto r = refine(truth, make_problem(truth, {6}, WeightsMode::uniform_fixed));
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
  CHECK(match_components(r.mixture, truth).max_error < 1e-12);
}

TEST_CASE("local recovery from a perturbed start") {
  const auto truth = random_mixture(3, 2, 42, WeightsMode::uniform_fixed);
  const auto p = make_problem(truth, {6}, WeightsMode::uniform_fixed);
  const auto r = refine(perturb(truth, 1e-3, 43, WeightsMode::uniform_fixed), p);
  CHECK(r.converged);
  CHECK(r.iterations <= 50);
  CHECK(match_components(r.mixture, truth).max_error <= 1e-8);
}

TEST_CASE("free weights with one degree land on a gauge-equivalent point") {
  const auto truth = random_mixture(3, 2, 42, WeightsMode::free);
  const auto p = make_problem(truth, {6}, WeightsMode::free);
  const auto r = refine(perturb(truth, 1e-3, 5, WeightsMode::free), p);
  REQUIRE(r.converged);
  const auto match = match_components(r.mixture, truth);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& f = r.mixture.components[i];
    const auto& t = truth.components[match.permutation[i]];
    const auto a = moment_form(f.params, 6).scaled(f.weight);
    const auto b = moment_form(t.params, 6).scaled(t.weight);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("component matching") {
  const auto truth = random_mixture(2, 3, 7, WeightsMode::free);
  auto m = match_components(truth, truth);
  CHECK(m.permutation == std::vector<std::size_t>{0, 1, 2});
  CHECK(m.max_error == 0.0);
  auto swapped = truth;
  std::swap(swapped.components[0], swapped.components[2]);
  m = match_components(swapped, truth);
  CHECK(m.permutation == std::vector<std::size_t>{2, 1, 0});
  CHECK(m.max_error == 0.0);
  const auto noisy = perturb(truth, 1e-6, 9, WeightsMode::free);
  m = match_components(noisy, truth);
  CHECK(m.permutation == std::vector<std::size_t>{0, 1, 2});
  CHECK(m.max_error <= 1e-6);
  CHECK(m.max_error > 0.0);
}

TEST_CASE("a vanishing jacobian is reported as divergence") {
  const auto truth = random_mixture(2, 2, 3, WeightsMode::uniform_fixed);
  const auto p = make_problem(truth, {6}, WeightsMode::uniform_fixed);
  // At mu = 0, Sigma = 0 every derivative of s_6 vanishes, so no step helps.
  const auto origin = unpack(Eigen::VectorXd::Zero(10), 2, 2, WeightsMode::uniform_fixed);
  CHECK_THROWS_AS(refine(origin, p), DivergenceError);
  CHECK_THROWS_AS(refine(random_mixture(3, 2, 1, WeightsMode::uniform_fixed), p), DomainError);
}
