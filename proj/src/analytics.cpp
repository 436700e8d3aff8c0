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

#include "twoside/analytics.hpp"

#include <numeric>

#include "twoside/policies.hpp"

namespace twoside {
namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double RegretReport::mean_population() const { return mean_of(per_step_population); }
double RegretReport::mean_policy() const { return mean_of(per_step_policy); }
double RegretReport::mean_const() const { return mean_of(per_step_const); }

RegretReport decompose_regret(const EnvironmentSpec& env, const Trajectory& baseline,
                              const Trajectory& subject) {
  if (baseline.env_digest != subject.env_digest) {
    throw PairingError("trajectories were recorded on different environments");
  }
  if (baseline.horizon() != subject.horizon()) {
    throw PairingError("trajectories have different horizons");
  }
  if (baseline.env_digest != env_digest(env)) {
    throw PairingError("trajectories were not recorded on this environment");
  }
  RegretReport r;
  const int T = subject.horizon();
  double running = 0.0;
  for (int t = 0; t < T; ++t) {
    const auto& star = baseline.steps[t];
    const auto& cur = subject.steps[t];
    const double r_star = star.welfare;
    const double r_cur = cur.welfare;
    const double r_greedy_star =
        welfare(env, star.state, myopic_greedy(env, star.state));
    const double r_greedy = welfare(env, cur.state, myopic_greedy(env, cur.state));

    const double population = r_greedy_star - r_greedy;
    const double policy = r_greedy - r_cur;
    const double constant = r_star - r_greedy_star;
    const double total = r_star - r_cur;
    r.per_step_population.push_back(population);
    r.per_step_policy.push_back(policy);
    r.per_step_const.push_back(constant);
    r.per_step_total.push_back(total);
    running += total;
    r.cumulative_total.push_back(running);
  }
  r.mean_total = mean_of(r.per_step_total);
  return r;
}

RegretSuite empirical_regret_suite(const EnvironmentSpec& env,
                                   const std::map<std::string, Trajectory>& trajectories) {
  if (trajectories.size() < 2) throw PairingError("regret suite needs at least 2 trajectories");
  RegretSuite suite;
  double best = 0.0;
  bool first = true;
  for (const auto& [name, traj] : trajectories) {
    const double w = traj.cumulative_welfare();
    if (first || w > best) {
      best = w;
      suite.baseline = name;
      first = false;
    }
  }
  const Trajectory& base = trajectories.at(suite.baseline);
  for (const auto& [name, traj] : trajectories) {
    suite.reports.emplace(name, decompose_regret(env, base, traj));
  }
  return suite;
}

}  // namespace twoside
