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

// Learning reference-population and population-effect curves from
// interaction logs, and the explore-then-commit loop that deploys look-ahead
// policies on a surrogate environment built from those curves.

#ifndef TWOSIDE_ESTIMATION_HPP_
#define TWOSIDE_ESTIMATION_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twoside/dynamics.hpp"
#include "twoside/model.hpp"
#include "twoside/policies.hpp"

namespace twoside {

struct InteractionRecord {
  int t = 0;
  Vector s;                // K
  Vector e;                // L
  Matrix q;                // K x L
  Vector lambda_viewer;    // K
  Vector lambda_provider;  // L
};

struct InteractionLog {
  std::vector<InteractionRecord> records;
  Vector eta_viewer;
  Vector eta_provider;
};

// Throws ValidationError when records are out of order or have gaps.
void validate(const InteractionLog& log);

// Inverts the population update: (lambda_{t+1} - lambda_t) / eta + lambda_t.
double recover_reference(double lambda_t, double lambda_t1, double eta);

struct CurveFit {
  SaturatingExp params;
  double rmse = 0.0;
};

// Least squares over a0 (1 - exp(-a1 (x - a2))) + a3 with a0, a1 >= 0.
// Since a2 only rescales a0, it is pinned at min x and the remaining three
// parameters are fitted by damped Gauss-Newton from five deterministic
// starts (plus `init`, if given). Returns the lowest-SSE fit.
CurveFit fit_saturating_exp(const std::vector<std::pair<double, double>>& points,
                            const std::optional<SaturatingExp>& init = std::nullopt);

struct FittedDynamics {
  std::vector<CurveFit> lambda_bar_viewer_hat;               // K
  std::vector<CurveFit> lambda_bar_provider_hat;             // L
  std::vector<std::vector<CurveFit>> f_hat;                  // K x L
};

// Fits every curve from the log. f_kl is regressed on (lambda_l, q_kl - b_kl)
// with B known; when B is empty the base utility is absorbed into a3 and the
// raw q_kl is regressed instead.
FittedDynamics fit_dynamics(const InteractionLog& log, const Matrix& B,
                            const FittedDynamics* previous = nullptr);

// Environment using the fitted curves in place of the true ones.
EnvironmentSpec surrogate_environment(const FittedDynamics& fit, const Matrix& B,
                                      const Vector& eta_viewer, const Vector& eta_provider);

// The platform's view of an environment: it can deploy a policy and observe
// the payoffs and populations, but not the underlying curves.
class Blackbox {
 public:
  virtual ~Blackbox() = default;
  virtual int K() const = 0;
  virtual int L() const = 0;
  virtual const Matrix& base_utility() const = 0;
  virtual const Vector& eta_viewer() const = 0;
  virtual const Vector& eta_provider() const = 0;
  virtual const PopulationState& state() const = 0;
  // Records the payoffs at the current population under pi, then advances.
  virtual InteractionRecord deploy(const PolicyMatrix& pi) = 0;
};

class SimulatorBlackbox : public Blackbox {
 public:
  SimulatorBlackbox(EnvironmentSpec env, PopulationState init, std::uint64_t seed);

  int K() const override { return env_.K; }
  int L() const override { return env_.L; }
  const Matrix& base_utility() const override { return env_.B; }
  const Vector& eta_viewer() const override { return env_.eta_viewer; }
  const Vector& eta_provider() const override { return env_.eta_provider; }
  const PopulationState& state() const override { return state_; }
  InteractionRecord deploy(const PolicyMatrix& pi) override;

  const EnvironmentSpec& environment() const { return env_; }

 private:
  EnvironmentSpec env_;
  PopulationState state_;
  Rng rng_;
};

struct ExploreThenCommitConfig {
  int burn_in = 10;   // T_b
  int horizon = 50;   // T
  double beta = 1.0;
  int refit_every = 1;
  LookaheadConfig lookahead;
};

struct EstimationEvent {
  int t = 0;
  std::string message;
};

struct ExploreThenCommitResult {
  Trajectory trajectory;
  InteractionLog log;
  FittedDynamics fit;
  std::vector<EstimationEvent> warnings;
};

// Steps 0 .. burn_in-1 deploy epsilon-greedy on B with epsilon = beta. Each
// later step refits (every refit_every steps), optimizes the look-ahead
// policy on the surrogate, interpolates with the surrogate's myopic policy
// by beta, and deploys it. A failed refit keeps the previous fit and logs a
// warning; failing before any fit succeeded throws EstimationError.
ExploreThenCommitResult explore_then_commit(Blackbox& box, const ExploreThenCommitConfig& cfg);

}  // namespace twoside

#endif  // TWOSIDE_ESTIMATION_HPP_
