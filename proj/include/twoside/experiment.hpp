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

// Synthetic scenario generation and the batch experiment runner.

#ifndef TWOSIDE_EXPERIMENT_HPP_
#define TWOSIDE_EXPERIMENT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twoside/analytics.hpp"
#include "twoside/io.hpp"
#include "twoside/policies.hpp"

namespace twoside {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct InitSpec {
  std::string kind = "small";  // small | large | custom
  double mean = 20.0;
  double std = 10.0;
};

struct SyntheticScenarioConfig {
  int K = 20;
  int L = 20;
  int d = 20;
  double feature_bernoulli_p = 0.5;
  // Reference curves lambda_max (sigmoid(z / tau) - 0.5), viewers then
  // providers.
  Interval lambda_max_range{80.0, 160.0};
  Interval tau_range{2.0, 4.0};
  Interval provider_lambda_max_range{60.0, 120.0};
  Interval provider_tau_range{2.0, 4.0};
  // Per-provider, per-dimension quality curves.
  Interval quality_max_range{10.0, 50.0};
  Interval quality_tau_range{5.0, 10.0};
  InitSpec init;
  double eta = 0.05;
  int T = 200;
  std::uint64_t seed = 0;
};

// Throws ConfigError for non-positive counts, p outside (0, 1), empty or
// non-positive ranges, eta outside [0, 1] or T < 1.
void validate(const SyntheticScenarioConfig& cfg);

SyntheticScenarioConfig synthetic_config_from_json(const Json& j);
Json to_json(const SyntheticScenarioConfig& cfg);

// b_kl = u_k . c_l over Bernoulli features; f_kl is the u_k-weighted sum of
// provider l's d quality curves; reference functions are SigmoidHalf.
EnvironmentSpec gen_synthetic(const SyntheticScenarioConfig& cfg);

// Normal(mean, std^2) draws clipped at 0, from a stream separate from the
// one gen_synthetic uses.
PopulationState synthetic_initial_population(const SyntheticScenarioConfig& cfg);

struct PolicySpec {
  std::string name;
  std::string kind;  // uniform | myopic | epsilon_greedy | lookahead
  double epsilon = 0.0;
  double beta = 1.0;
  LookaheadConfig lookahead;
};

// Builds the rule, raising ConfigError that names the policy on failure.
PolicyRule make_policy_rule(const PolicySpec& spec, const EnvironmentSpec& env);

struct ExperimentConfig {
  EnvironmentSpec environment;
  PopulationState init;
  std::vector<PolicySpec> policies;
  int T = 200;
  std::vector<std::uint64_t> seeds{0};
  std::string outputs;  // empty: nothing written
  bool emit_csv = true;
  bool emit_summary = true;
};

void validate(const ExperimentConfig& cfg);

// Accepts either "environment" (inline spec plus "init") or "synthetic"
// (a SyntheticScenarioConfig; init and T default from it).
ExperimentConfig experiment_config_from_json(const Json& j);

struct ExperimentResult {
  // Keyed by (policy name, seed).
  std::map<std::pair<std::string, std::uint64_t>, Trajectory> trajectories;
  std::map<std::uint64_t, RegretSuite> regret;  // only with two or more policies
  Json summary;
  std::vector<std::string> files;  // relative to cfg.outputs, sorted
};

// Cells run in parallel on up to TWOSIDE_SIM_THREADS threads (default: the
// hardware concurrency). Output is independent of the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace twoside

#endif  // TWOSIDE_EXPERIMENT_HPP_
