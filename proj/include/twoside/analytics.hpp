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

// Empirical regret of a trajectory against a designated baseline, split
// into population, policy and constant terms that sum exactly to the total.

#ifndef TWOSIDE_ANALYTICS_HPP_
#define TWOSIDE_ANALYTICS_HPP_

#include <map>
#include <string>
#include <vector>

#include "twoside/dynamics.hpp"

namespace twoside {

struct RegretReport {
  std::vector<double> per_step_total;
  std::vector<double> per_step_population;
  std::vector<double> per_step_policy;
  std::vector<double> per_step_const;
  std::vector<double> cumulative_total;
  double mean_total = 0.0;

  double mean_population() const;
  double mean_policy() const;
  double mean_const() const;
};

// At each t, with g_t = myopic_greedy at the subject population and g*_t at
// the baseline population:
//   population = R(g*_t; lambda*_t) - R(g_t; lambda_t)
//   policy     = R(g_t; lambda_t)   - R(pi_t; lambda_t)
//   const      = R(pi*_t; lambda*_t) - R(g*_t; lambda*_t)
//   total      = R(pi*_t; lambda*_t) - R(pi_t; lambda_t)
// Throws PairingError when the trajectories disagree on env digest or horizon.
RegretReport decompose_regret(const EnvironmentSpec& env, const Trajectory& baseline,
                              const Trajectory& subject);

struct RegretSuite {
  std::string baseline;
  std::map<std::string, RegretReport> reports;  // includes the baseline itself
};

// Picks the trajectory with the highest cumulative welfare as baseline (ties
// to the lexicographically first name) and decomposes every trajectory,
// the baseline included, against it.
RegretSuite empirical_regret_suite(const EnvironmentSpec& env,
                                   const std::map<std::string, Trajectory>& trajectories);

}  // namespace twoside

#endif  // TWOSIDE_ANALYTICS_HPP_
