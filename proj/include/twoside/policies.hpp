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

// Allocation policies, including the look-ahead policy that maximizes
// welfare at the reference populations a policy would induce.

#ifndef TWOSIDE_POLICIES_HPP_
#define TWOSIDE_POLICIES_HPP_

#include <optional>

#include "twoside/dynamics.hpp"
#include "twoside/model.hpp"

namespace twoside {

PolicyMatrix uniform_policy(int K, int L);

// All of row k on argmax_l b_kl + f_kl(lambda_l); ties to the lowest index.
PolicyMatrix myopic_greedy(const EnvironmentSpec& env, const PopulationState& state);

// Row-wise softmax of gamma * (b_kl + f_kl(lbar_l(e_l))).
PolicyMatrix softmax_myopic(const EnvironmentSpec& env, const Vector& reference_exposure,
                            double gamma);

// Row-wise softmax with the row max subtracted first.
Matrix row_softmax(const Matrix& logits);

struct GradCheck {
  double h = 1e-6;
  double tol = 1e-4;
};

struct LookaheadConfig {
  double gamma = 10.0;
  int iterations = 100;
  double learning_rate = 0.05;
  std::optional<GradCheck> grad_check;
};

void validate(const LookaheadConfig& cfg);

// Welfare at the reference populations induced by pi, served by the
// softmax-myopic policy at those populations.
double lookahead_objective(const EnvironmentSpec& env, const PopulationState& state,
                           const PolicyMatrix& pi, double gamma);
// Same composite, evaluated for an arbitrary K x L matrix (no simplex check).
double lookahead_objective_raw(const EnvironmentSpec& env, const PopulationState& state,
                               const Matrix& pi, double gamma);

// d objective / d pi_kl, treating every entry as a free coordinate. Uses the
// analytic chain rule when all functions are smooth, central differences
// otherwise.
Matrix lookahead_gradient(const EnvironmentSpec& env, const PopulationState& state,
                          const PolicyMatrix& pi, double gamma);
Matrix lookahead_gradient_raw(const EnvironmentSpec& env, const PopulationState& state,
                              const Matrix& pi, double gamma);
Matrix lookahead_gradient_fd(const EnvironmentSpec& env, const PopulationState& state,
                             const Matrix& pi, double gamma, double h = 1e-6);

struct LookaheadResult {
  PolicyMatrix policy;
  double objective = 0.0;
  double initial_objective = 0.0;
  int best_iteration = 0;  // 0 means the initialization was best
};

// Gradient ascent on row logits, pi = row_softmax(theta), started from the
// logits of 0.9 * greedy + 0.1 * uniform. Returns the best iterate seen.
LookaheadResult optimize_lookahead_detailed(const EnvironmentSpec& env,
                                            const PopulationState& state,
                                            const LookaheadConfig& config);
PolicyMatrix optimize_lookahead(const EnvironmentSpec& env, const PopulationState& state,
                                const LookaheadConfig& config);

// beta * lookahead + (1 - beta) * myopic.
PolicyMatrix interpolate(const PolicyMatrix& pi_lookahead, const PolicyMatrix& pi_myopic,
                         double beta);

// State-dependent rules for rollouts.
PolicyRule myopic_rule();
PolicyRule lookahead_rule(double beta, LookaheadConfig config);

}  // namespace twoside

#endif  // TWOSIDE_POLICIES_HPP_
