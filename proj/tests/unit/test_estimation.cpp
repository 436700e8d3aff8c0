// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "support/instances.hpp"
#include "twoside/estimation.hpp"

using namespace twoside;

namespace {

std::vector<std::pair<double, double>> sample(const SaturatingExp& fn, double lo, double hi, int n) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    pts.emplace_back(x, eval(fn, x));
  }
  return pts;
}

// K = L = 2 environment whose curves all live in the fitted family.
EnvironmentSpec toy_env() {
  EnvironmentSpec env;
  env.K = env.L = 2;
  env.B = Matrix(2, 2);
  env.B << 1.0, 0.4, 0.3, 0.8;
  env.f = {{SaturatingExp{1.0, 0.5, 0.0, 0.0}, SaturatingExp{0.6, 0.8, 0.0, 0.0}},
           {SaturatingExp{0.8, 0.6, 0.0, 0.0}, SaturatingExp{1.2, 0.4, 0.0, 0.0}}};
  env.lambda_bar_viewer = {SaturatingExp{4.0, 0.5, 0.0, 0.0}, SaturatingExp{3.0, 0.7, 0.0, 0.0}};
  env.lambda_bar_provider = {SaturatingExp{3.5, 0.4, 0.0, 0.0}, SaturatingExp{2.5, 0.6, 0.0, 0.0}};
  env.eta_viewer = Vector::Constant(2, 0.3);
  env.eta_provider = Vector::Constant(2, 0.3);
  return env;
}

PopulationState toy_init() {
  PopulationState s;
  s.viewer = Vector::Constant(2, 0.5);
  s.provider = Vector::Constant(2, 0.5);
  return s;
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("recover reference") {
  CHECK(recover_reference(3.0, 7.0, 1.0) == 7.0);
  CHECK(recover_reference(4.0, 4.0, 0.3) == 4.0);
  CHECK(recover_reference(10.0, 15.0, 0.5) == 20.0);
  CHECK_THROWS_AS(recover_reference(1.0, 2.0, 0.0), DomainError);

  Rng g(1);
  const EnvironmentSpec env = testing::random_smooth_env(g, 2, 2);
  const PopulationState st = testing::random_state(g, 2, 2);
  const PolicyMatrix pi = testing::random_policy(g, 2, 2);
  const PopulationState next = dynamics_map(env, st, pi);
  const Payoffs p = payoffs(env, st, pi);
  for (int k = 0; k < 2; ++k) {
    if (next.viewer(k) == 0.0) continue;
    CHECK(std::abs(recover_reference(st.viewer(k), next.viewer(k), env.eta_viewer(k)) -
                   eval(env.lambda_bar_viewer[k], p.s(k))) <= 1e-12 * std::max(1.0, st.viewer(k) / env.eta_viewer(k)));
  }
}

TEST_CASE("fit recovers a noiseless curve") {
  const SaturatingExp truth{5.0, 0.1, 0.0, 1.0};
  const auto pts = sample(truth, 0.0, 30.0, 20);
  const CurveFit fit = fit_saturating_exp(pts);
  CHECK(fit.rmse <= 1e-6);
  for (const auto& [x, y] : pts) CHECK(std::abs(eval(fit.params, x) - y) <= 1e-5);
  CHECK(fit.params.a0 * fit.params.a1 >= 0.0);
}

TEST_CASE("fit of constant data") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(i * 0.5, 2.5);
  const CurveFit fit = fit_saturating_exp(pts);
  for (double x = 0.0; x <= 3.5; x += 0.25) CHECK(std::abs(eval(fit.params, x) - 2.5) <= 1e-8);
}

TEST_CASE("fit of a short straight line") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 10; ++i) {
    const double x = 2.0 + 0.1 * i;
    pts.emplace_back(x, 0.5 + 1.5 * x);
  }
  const CurveFit fit = fit_saturating_exp(pts);
  for (const auto& [x, y] : pts) CHECK(std::abs(eval(fit.params, x) - y) <= 0.01 * std::abs(y));
}

TEST_CASE("fit errors") {
  CHECK_THROWS_AS(fit_saturating_exp({{0, 1}, {1, 2}, {2, 3}}), EstimationError);
  CHECK_THROWS_WITH_AS(fit_saturating_exp({{1, 1}, {1, 2}, {1, 3}, {1, 4}}),
                       doctest::Contains("degenerate"), EstimationError);
  CHECK_THROWS_AS(fit_saturating_exp({{0, 1}, {0, 2}, {1, 3}, {1, 4}}), EstimationError);
  CHECK_THROWS_AS(fit_saturating_exp({{0, 1}, {1, NAN}, {2, 3}, {3, 4}}), DomainError);
}

TEST_CASE("log validation") {
  InteractionLog log;
  InteractionRecord r;
  r.t = 0;
  log.records.push_back(r);
  r.t = 2;
  log.records.push_back(r);
  CHECK_THROWS_AS(validate(log), ValidationError);
}

TEST_CASE("explore then commit bookkeeping") {
  SimulatorBlackbox box(toy_env(), toy_init(), 0);
  ExploreThenCommitConfig cfg;
  cfg.burn_in = 10;
  cfg.horizon = 20;
  cfg.refit_every = 1;
  cfg.lookahead.iterations = 20;
  const ExploreThenCommitResult res = explore_then_commit(box, cfg);
  REQUIRE(res.trajectory.horizon() == 20);
  CHECK(res.log.records.size() == 20);
  for (const auto& st : res.trajectory.steps) CHECK_NOTHROW(validate_policy(st.policy.rows(), false));
  const PolicyMatrix burn = epsilon_greedy(toy_env().B, 1.0);
  CHECK(res.trajectory.steps[3].policy.rows() == burn.rows());

  ExploreThenCommitConfig bad = cfg;
  bad.horizon = 10;
  CHECK_THROWS_AS(explore_then_commit(box, bad), ConfigError);
}

TEST_CASE("explore then commit with beta zero deploys the surrogate greedy policy") {
  SimulatorBlackbox box(toy_env(), toy_init(), 0);
  ExploreThenCommitConfig cfg;
  cfg.burn_in = 10;
  cfg.horizon = 15;
  cfg.beta = 0.0;
  const ExploreThenCommitResult res = explore_then_commit(box, cfg);
  const EnvironmentSpec sur =
      surrogate_environment(res.fit, toy_env().B, toy_env().eta_viewer, toy_env().eta_provider);
  const TrajectoryStep& last = res.trajectory.steps.back();
  CHECK(last.policy.rows() == myopic_greedy(sur, last.state).rows());
  for (const auto& st : res.trajectory.steps) {
    for (int k = 0; k < 2; ++k) CHECK(st.policy.rows().row(k).maxCoeff() == 1.0);
  }
}

TEST_CASE("noiseless recovery of the generating curves") {
  const EnvironmentSpec env = toy_env();
  SimulatorBlackbox box(env, toy_init(), 0);
  ExploreThenCommitConfig cfg;
  cfg.burn_in = 10;
  cfg.horizon = 50;
  cfg.refit_every = 10;
  cfg.lookahead.iterations = 30;
  const ExploreThenCommitResult res = explore_then_commit(box, cfg);
  double worst = 0.0;
  for (int k = 0; k < 2; ++k) {
    double lo = INFINITY, hi = -INFINITY;
    for (size_t t = 0; t + 1 < res.log.records.size(); ++t) {
      lo = std::min(lo, res.log.records[t].s(k));
      hi = std::max(hi, res.log.records[t].s(k));
    }
    for (int i = 0; i <= 20; ++i) {
      const double x = lo + (hi - lo) * i / 20.0;
      const double y = eval(env.lambda_bar_viewer[k], x);
      worst = std::max(worst, std::abs(eval(res.fit.lambda_bar_viewer_hat[k].params, x) - y) / std::abs(y));
    }
  }
  CHECK(worst <= 0.01);
}

TEST_CASE("determinism") {
  EnvironmentSpec env = toy_env();
  env.noise = NoiseSpec{0.01};
  ExploreThenCommitConfig cfg;
  cfg.burn_in = 10;
  cfg.horizon = 25;
  cfg.refit_every = 5;
  cfg.lookahead.iterations = 10;
  SimulatorBlackbox a(env, toy_init(), 3), b(env, toy_init(), 3);
  const auto ra = explore_then_commit(a, cfg);
  const auto rb = explore_then_commit(b, cfg);
  for (int t = 0; t < 25; ++t) {
    CHECK(ra.trajectory.steps[t].state.viewer == rb.trajectory.steps[t].state.viewer);
    CHECK(ra.trajectory.steps[t].policy.rows() == rb.trajectory.steps[t].policy.rows());
  }
}

}  // TEST_SUITE
