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

// Payoffs, population updates, rollouts, fixed points and local stability.

#ifndef TWOSIDE_DYNAMICS_HPP_
#define TWOSIDE_DYNAMICS_HPP_

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "twoside/model.hpp"

namespace twoside {

using Rng = std::mt19937_64;

// q = b + f(lambda_l), s_k = sum_l pi q, e_l = sum_k pi lambda_k.
Payoffs payoffs(const EnvironmentSpec& env, const PopulationState& state,
                const PolicyMatrix& pi);

// Unvalidated form used by gradient checks that leave the simplex.
Payoffs payoffs_raw(const EnvironmentSpec& env, const PopulationState& state,
                    const Matrix& pi);

// R = sum_k lambda_k s_k.
double welfare(const PopulationState& state, const Payoffs& p);

// Convenience: welfare of pi at state.
double welfare(const EnvironmentSpec& env, const PopulationState& state,
               const PolicyMatrix& pi);

// The deterministic dynamics map S (no noise), clipped at zero, t + 1.
PopulationState dynamics_map(const EnvironmentSpec& env, const PopulationState& state,
                             const PolicyMatrix& pi);

// One update. Applies multiplicative Gaussian noise when env.noise is set.
PopulationState step(const EnvironmentSpec& env, const PopulationState& state,
                     const PolicyMatrix& pi, Rng& rng);

struct TrajectoryStep {
  PopulationState state;
  PolicyMatrix policy;
  Payoffs payoffs;
  double welfare = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::uint64_t env_digest = 0;
  std::uint64_t seed = 0;

  int horizon() const { return static_cast<int>(steps.size()); }
  double cumulative_welfare() const;
};

// Produces the policy deployed at a given state.
using PolicyRule =
    std::function<PolicyMatrix(const EnvironmentSpec&, const PopulationState&)>;

PolicyRule constant_rule(PolicyMatrix pi);

// Records state, policy, payoffs and welfare at each of T steps, then
// applies the update. The generator is seeded from `seed`.
Trajectory rollout(const EnvironmentSpec& env, const PolicyRule& rule, int T,
                   const PopulationState& init, std::uint64_t seed);
Trajectory rollout(const EnvironmentSpec& env, const PolicyRule& rule, int T,
                   const PopulationState& init);

// FNV-1a over the canonical JSON form of env.
std::uint64_t env_digest(const EnvironmentSpec& env);

// ---------------------------------------------------------------------------
// Fixed points.

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, PopulationState last, double residual)
      : Error("convergence", what), last_(std::move(last)), residual_(residual) {}
  const PopulationState& last_iterate() const { return last_; }
  double residual() const { return residual_; }

 private:
  PopulationState last_;
  double residual_;
};

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 100000;
};

// Max-norm of lambda - S(lambda).
double fixed_point_residual(const EnvironmentSpec& env, const PopulationState& state,
                            const PolicyMatrix& pi);

// Iterates S from init until the max-norm residual is at most tol.
PopulationState find_fixed_point(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                 const PopulationState& init,
                                 const FixedPointOptions& opts = {});

// Multi-start: one solve per init, non-converging starts dropped, results
// deduplicated at 10 * tol max-norm separation (first occurrence kept).
std::vector<PopulationState> find_fixed_points(const EnvironmentSpec& env,
                                               const PolicyMatrix& pi,
                                               const std::vector<PopulationState>& inits,
                                               const FixedPointOptions& opts = {});

// ---------------------------------------------------------------------------
// Stability.

// (K + L) x (K + L) Jacobian of S at `at`, ordered viewers then providers:
//   [ diag(1 - eta_k)          eta_k lbar_k' pi_kl f_kl' ]
//   [ eta_l lbar_l' pi_kl      diag(1 - eta_l)           ]
Matrix dynamics_jacobian(const EnvironmentSpec& env, const PolicyMatrix& pi,
                         const PopulationState& at);

struct StabilityReport {
  PopulationState fixed_point;
  Matrix jacobian;
  // {1 - eta_k} followed by the per-provider closed-form values
  //   eta_l (1 - eta_l) lbar_l'(e_l) sum_k eta_k lbar_k'(s_k) pi_kl f_kl'(lambda_l).
  std::vector<double> formula_eigenvalues;
  // Dense eigen-decomposition of `jacobian`.
  std::vector<std::complex<double>> eigenvalues;
  double spectral_radius = 0.0;          // of `eigenvalues`
  double formula_spectral_radius = 0.0;  // of `formula_eigenvalues`
  // Largest gap between the two lists after sorting each by (re, im).
  double formula_mismatch = 0.0;
  bool stable = false;  // spectral_radius < 1
  // Bound constants evaluated at the point, and the resulting check.
  double c1 = 0.0;  // max_{k,l} lbar_l'(e_l) f_kl'(lambda_l)
  double c2 = 0.0;  // max_k lbar_k'(s_k)
  bool sufficient_condition_holds = false;
  double residual = 0.0;
};

// Throws PreconditionError when the residual at `at` exceeds 10 * tol.
StabilityReport jacobian_eigenvalues(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                     const PopulationState& at, double tol = 1e-10);

// Every provider column satisfies sum_k pi_kl <= 4 / (eta C1 C2) with
// eta = max_k eta_k.
bool check_sufficient_stability(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                double C1, double C2);

// Exact spectrum of the Jacobian when all viewer rates equal eta_u and all
// provider rates equal eta_c, through the reduction
//   (1 - eta_u - mu)(1 - eta_c - mu) = nu,  nu in spec(A21 A12),
// plus 1 - eta_u with multiplicity K - L when K > L. Throws PreconditionError
// for heterogeneous rates.
std::vector<std::complex<double>> block_reduced_eigenvalues(const EnvironmentSpec& env,
                                                            const PolicyMatrix& pi,
                                                            const PopulationState& at);

// Sorts by (real, imag) and returns the largest elementwise modulus gap;
// +inf when sizes differ.
double sorted_spectrum_gap(std::vector<std::complex<double>> a,
                           std::vector<std::complex<double>> b);

}  // namespace twoside

#endif  // TWOSIDE_DYNAMICS_HPP_
