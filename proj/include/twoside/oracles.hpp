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

// Game-theoretic view of the dynamics and closed forms for the linear case.
// These serve as ground truth for the simulator.

#ifndef TWOSIDE_ORACLES_HPP_
#define TWOSIDE_ORACLES_HPP_

#include <utility>
#include <vector>

#include "twoside/dynamics.hpp"
#include "twoside/model.hpp"

namespace twoside {

struct GameUtilities {
  Vector u;  // viewer utilities, length K
  Vector v;  // provider utilities, length L
};

// u_k = lambda_k lbar_k(sum_l pi_kl (b_kl + f_kl(lambda_l))) - lambda_k^2 / 2
// v_l = lambda_l lbar_l(sum_k pi_kl lambda_k) - lambda_l^2 / 2
GameUtilities game_utilities(const EnvironmentSpec& env, const PolicyMatrix& pi,
                             const PopulationState& state);

// Own-strategy partial derivatives of the utilities above.
GameUtilities game_utility_gradients(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                     const PopulationState& state);

// Simultaneous gradient ascent on every group's own utility, with the
// environment's reactiveness rates as step sizes, projected onto >= 0.
PopulationState gradient_ascent_update(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                       const PopulationState& state);

// No unilateral deviation by +-delta (kept >= 0) improves any group's
// utility by more than slack.
bool is_nash_equilibrium(const EnvironmentSpec& env, const PolicyMatrix& pi,
                         const PopulationState& state,
                         const std::vector<double>& deltas = {1e-3, 1e-2, 1e-1},
                         double slack = 1e-9);

// ---------------------------------------------------------------------------
// Linear case: f(x) = a0 x, lbar_k(x) = a1 x, lbar_l(x) = a2 x + b2, with
// any constant offsets absorbed into B.

struct LinearGameParams {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
  Matrix B;  // K x L
};

void validate(const LinearGameParams& p);

// Environment realizing the linear game (all rates set to eta).
EnvironmentSpec linear_environment(const LinearGameParams& p, double eta = 1.0);

// I_K - a0 a1 a2 pi pi^T, with pi the K x L policy.
Matrix linear_system_matrix(const LinearGameParams& p, const PolicyMatrix& pi);

// Closed-form equilibrium:
//   lambda_u = a1 M^{-1} (diag(pi B^T) + a0 b2 1_K),
//   lambda_c = a2 pi^T lambda_u + b2 1_L.
// Throws OracleDomainError unless M is positive definite.
PopulationState linear_ne(const LinearGameParams& p, const PolicyMatrix& pi);

// a1 || M^{-1} (diag(pi B^T) + a0 b2 1_K) ||^2.
double linear_welfare(const LinearGameParams& p, const PolicyMatrix& pi);
// ||lambda_u||^2 / a1 at linear_ne.
double linear_welfare_from_ne(const LinearGameParams& p, const PolicyMatrix& pi);

// Size of the largest group of viewer rows sharing the same argmax column.
int largest_greedy_cluster(const Matrix& B);

struct WelfareBounds {
  double g = 0.0;
  double h = 0.0;
  double lower() const { return g; }
  double upper() const { return g * h; }
};

// g(eps) = a1 || (1 - eps) b0 + eps b1 + a0 b2 1_K ||^2 with b0 the row
// maxima and b1 the row means of B;
// h(eps) = (1 - a K1 + a eps (2 - eps) (K1 - K / L))^{-2}, a = a0 a1 a2.
WelfareBounds epsilon_welfare_bounds(const LinearGameParams& p, double epsilon);

// ---------------------------------------------------------------------------
// Heterogeneous counterexample: K = 1, L = 2, B = [1, 0.9], provider 1 has
// no population effect, a0 a2 b2 = 0.4.

// (0.9 + 0.1 pi11) / (1 - 0.4 (1 - pi11)^2)
double counterexample_welfare(double pi11);

// Unit-slope realization: lbar_u(x) = x, lbar_c1(x) = x, lbar_c2(x) = x,
// f_1 = 0, f_2(x) = 0.4 x, so equilibrium welfare equals r_tilde^2.
EnvironmentSpec counterexample_environment(double eta = 1.0);

// Two-player instance with three equilibria:
//   lbar_u(x) = sigmoid(4 (2x - 1)), lbar_c(x) = sigmoid(3 (2x - 1)),
//   f identity, b = 0.
EnvironmentSpec three_equilibria_environment(double eta = 0.5);

}  // namespace twoside

#endif  // TWOSIDE_ORACLES_HPP_
