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

#include "twoside/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace twoside {
namespace {

void check_range(const Interval& r, const char* name) {
  if (!(r.lo > 0.0 && r.hi >= r.lo && std::isfinite(r.hi))) {
    throw ConfigError(std::string(name) + " must be a positive interval");
  }
}

double draw(Rng& rng, const Interval& r) {
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

Interval interval_from(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_array() || v.size() != 2) throw ConfigError(std::string(key) + " must be [lo, hi]");
  return Interval{v[0].get<double>(), v[1].get<double>()};
}

Json interval_json(const Interval& r) { return Json::array({r.lo, r.hi}); }

}  // namespace

void validate(const SyntheticScenarioConfig& c) {
  if (c.K < 1 || c.L < 1 || c.d < 1) throw ConfigError("K, L and d must be >= 1");
  if (!(c.feature_bernoulli_p > 0.0 && c.feature_bernoulli_p < 1.0)) {
    throw ConfigError("feature_bernoulli_p must lie in (0, 1)");
  }
  check_range(c.lambda_max_range, "lambda_max_range");
  check_range(c.tau_range, "tau_range");
  check_range(c.provider_lambda_max_range, "provider_lambda_max_range");
  check_range(c.provider_tau_range, "provider_tau_range");
  check_range(c.quality_max_range, "quality_max_range");
  check_range(c.quality_tau_range, "quality_tau_range");
  if (c.init.kind != "small" && c.init.kind != "large" && c.init.kind != "custom") {
    throw ConfigError("init kind must be small, large or custom");
  }
  if (!(c.init.std >= 0.0) || !std::isfinite(c.init.mean)) {
    throw ConfigError("init needs a finite mean and std >= 0");
  }
  if (!(c.eta >= 0.0 && c.eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
  if (c.T < 1) throw ConfigError("T must be >= 1");
}

SyntheticScenarioConfig synthetic_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("synthetic config must be an object");
  SyntheticScenarioConfig c;
  try {
    if (j.contains("K")) c.K = j.at("K").get<int>();
    if (j.contains("L")) c.L = j.at("L").get<int>();
    if (j.contains("d")) c.d = j.at("d").get<int>();
    if (j.contains("feature_bernoulli_p")) {
      c.feature_bernoulli_p = j.at("feature_bernoulli_p").get<double>();
    }
    if (j.contains("lambda_max_range")) c.lambda_max_range = interval_from(j, "lambda_max_range");
    if (j.contains("tau_range")) c.tau_range = interval_from(j, "tau_range");
    if (j.contains("provider_lambda_max_range")) {
      c.provider_lambda_max_range = interval_from(j, "provider_lambda_max_range");
    }
    if (j.contains("provider_tau_range")) {
      c.provider_tau_range = interval_from(j, "provider_tau_range");
    }
    if (j.contains("quality_max_range")) {
      c.quality_max_range = interval_from(j, "quality_max_range");
    }
    if (j.contains("quality_tau_range")) {
      c.quality_tau_range = interval_from(j, "quality_tau_range");
    }
    if (j.contains("init")) {
      const Json& in = j.at("init");
      const std::string kind = in.is_string() ? in.get<std::string>() : in.at("kind").get<std::string>();
      c.init.kind = kind;
      if (kind == "large") {
        c.init.mean = 100.0;
        c.init.std = 30.0;
      } else if (kind == "custom") {
        c.init.mean = in.at("mean").get<double>();
        c.init.std = in.at("std").get<double>();
      }
    }
    if (j.contains("eta")) c.eta = j.at("eta").get<double>();
    if (j.contains("T")) c.T = j.at("T").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed synthetic config: ") + e.what());
  }
  validate(c);
  return c;
}

Json to_json(const SyntheticScenarioConfig& c) {
  return Json{{"K", c.K},
         {"L", c.L},
         {"d", c.d},
         {"feature_bernoulli_p", c.feature_bernoulli_p},
         {"lambda_max_range", interval_json(c.lambda_max_range)},
         {"tau_range", interval_json(c.tau_range)},
         {"provider_lambda_max_range", interval_json(c.provider_lambda_max_range)},
         {"provider_tau_range", interval_json(c.provider_tau_range)},
         {"quality_max_range", interval_json(c.quality_max_range)},
         {"quality_tau_range", interval_json(c.quality_tau_range)},
         {"init", Json{{"kind", c.init.kind}, {"mean", c.init.mean}, {"std", c.init.std}}},
         {"eta", c.eta},
         {"T", c.T},
         {"seed", c.seed}};
}

EnvironmentSpec gen_synthetic(const SyntheticScenarioConfig& c) {
  validate(c);
  Rng rng(c.seed);
  std::bernoulli_distribution coin(c.feature_bernoulli_p);
  Matrix U(c.K, c.d), C(c.L, c.d);
  for (int k = 0; k < c.K; ++k) {
    for (int i = 0; i < c.d; ++i) U(k, i) = coin(rng) ? 1.0 : 0.0;
  }
  for (int l = 0; l < c.L; ++l) {
    for (int i = 0; i < c.d; ++i) C(l, i) = coin(rng) ? 1.0 : 0.0;
  }
  std::vector<std::vector<SigmoidHalf>> quality(c.L);
  for (int l = 0; l < c.L; ++l) {
    for (int i = 0; i < c.d; ++i) {
      const double fmax = draw(rng, c.quality_max_range);
      const double ftau = draw(rng, c.quality_tau_range);
      quality[l].push_back(SigmoidHalf{fmax, ftau});
    }
  }
  EnvironmentSpec env;
  env.K = c.K;
  env.L = c.L;
  env.B = U * C.transpose();
  env.f.resize(c.K);
  for (int k = 0; k < c.K; ++k) {
    std::vector<double> w;
    for (int i = 0; i < c.d; ++i) w.push_back(U(k, i));
    for (int l = 0; l < c.L; ++l) env.f[k].emplace_back(WeightedSigmoidSum{w, quality[l]});
  }
  for (int k = 0; k < c.K; ++k) {
    const double m = draw(rng, c.lambda_max_range);
    env.lambda_bar_viewer.emplace_back(SigmoidHalf{m, draw(rng, c.tau_range)});
  }
  for (int l = 0; l < c.L; ++l) {
    const double m = draw(rng, c.provider_lambda_max_range);
    env.lambda_bar_provider.emplace_back(SigmoidHalf{m, draw(rng, c.provider_tau_range)});
  }
  env.eta_viewer = Vector::Constant(c.K, c.eta);
  env.eta_provider = Vector::Constant(c.L, c.eta);
  env.seed = c.seed;
  validate(env);
  return env;
}

PopulationState synthetic_initial_population(const SyntheticScenarioConfig& c) {
  validate(c);
  Rng rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(c.init.mean, c.init.std);
  PopulationState s;
  s.viewer.resize(c.K);
  s.provider.resize(c.L);
  for (int k = 0; k < c.K; ++k) s.viewer(k) = std::max(0.0, normal(rng));
  for (int l = 0; l < c.L; ++l) s.provider(l) = std::max(0.0, normal(rng));
  return s;
}

// ---------------------------------------------------------------------------

PolicyRule make_policy_rule(const PolicySpec& spec, const EnvironmentSpec& env) {
  try {
    if (spec.kind == "uniform") return constant_rule(uniform_policy(env.K, env.L));
    if (spec.kind == "myopic") return myopic_rule();
    if (spec.kind == "epsilon_greedy") {
      if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0)) {
        throw DomainError("epsilon must lie in [0, 1]");
      }
      return constant_rule(epsilon_greedy(env.B, spec.epsilon));
    }
    if (spec.kind == "lookahead") return lookahead_rule(spec.beta, spec.lookahead);
    throw ConfigError("unknown policy kind '" + spec.kind + "'");
  } catch (const Error& e) {
    throw ConfigError("policy '" + spec.name + "': " + e.what());
  }
}

void validate(const ExperimentConfig& cfg) {
  validate(cfg.environment);
  validate(cfg.environment, cfg.init);
  if (cfg.policies.empty()) throw ConfigError("at least one policy is required");
  if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
  if (cfg.T < 1) throw ConfigError("T must be >= 1");
  std::vector<std::string> names;
  for (const auto& p : cfg.policies) {
    if (p.name.empty()) throw ConfigError("policy names must be non-empty");
    names.push_back(p.name);
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw ConfigError("policy names must be unique");
  }
}

namespace {

PolicySpec policy_spec_from_json(const Json& j) {
  PolicySpec p;
  p.kind = j.at("kind").get<std::string>();
  if (j.contains("epsilon")) p.epsilon = j.at("epsilon").get<double>();
  if (j.contains("beta")) p.beta = j.at("beta").get<double>();
  const Json& la = j.contains("lookahead") ? j.at("lookahead") : j;
  if (la.contains("gamma")) p.lookahead.gamma = la.at("gamma").get<double>();
  if (la.contains("iterations")) p.lookahead.iterations = la.at("iterations").get<int>();
  if (la.contains("learning_rate")) {
    p.lookahead.learning_rate = la.at("learning_rate").get<double>();
  }
  if (j.contains("name")) {
    p.name = j.at("name").get<std::string>();
  } else if (p.kind == "lookahead") {
    std::ostringstream ss;
    ss << "lookahead_beta" << p.beta;
    p.name = ss.str();
  } else if (p.kind == "epsilon_greedy") {
    std::ostringstream ss;
    ss << "epsilon_greedy_" << p.epsilon;
    p.name = ss.str();
  } else {
    p.name = p.kind;
  }
  return p;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be an object");
  ExperimentConfig cfg;
  try {
    std::optional<SyntheticScenarioConfig> synth;
    if (j.contains("synthetic")) {
      synth = synthetic_config_from_json(j.at("synthetic"));
      cfg.environment = gen_synthetic(*synth);
      cfg.init = synthetic_initial_population(*synth);
      cfg.T = synth->T;
    } else if (j.contains("environment")) {
      cfg.environment = environment_from_json(j.at("environment"));
      if (!j.contains("init")) throw ConfigError("an inline environment needs \"init\"");
    } else {
      throw ConfigError("config needs \"environment\" or \"synthetic\"");
    }
    if (j.contains("init")) cfg.init = population_from_json(j.at("init"));
    if (j.contains("T")) cfg.T = j.at("T").get<int>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::string>();
    if (j.contains("emit")) {
      const Json& e = j.at("emit");
      if (e.contains("csv")) cfg.emit_csv = e.at("csv").get<bool>();
      if (e.contains("json_summary")) cfg.emit_summary = e.at("json_summary").get<bool>();
    }
    if (!j.contains("policies") || !j.at("policies").is_array()) {
      throw ConfigError("config needs a \"policies\" array");
    }
    for (const auto& p : j.at("policies")) cfg.policies.push_back(policy_spec_from_json(p));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

// ---------------------------------------------------------------------------

namespace {

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* v = std::getenv("TWOSIDE_SIM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(v, &end, 10);
    if (end != v && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::string trajectory_file(const std::string& policy, std::uint64_t seed) {
  return "trajectory_" + policy + "_seed" + std::to_string(seed) + ".csv";
}

std::string regret_file(const std::string& policy, std::uint64_t seed) {
  return "regret_" + policy + "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<PolicyRule> rules;
  for (const auto& p : cfg.policies) rules.push_back(make_policy_rule(p, cfg.environment));

  namespace fs = std::filesystem;
  const bool write = !cfg.outputs.empty();
  if (write) {
    std::error_code ec;
    fs::create_directories(cfg.outputs, ec);
    if (ec || !fs::is_directory(cfg.outputs)) {
      throw IoError("cannot create output directory '" + cfg.outputs + "'");
    }
  }

  struct Cell {
    std::size_t policy;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
    for (std::uint64_t s : cfg.seeds) cells.push_back({p, s});
  }
  std::vector<Trajectory> results(cells.size());
  std::vector<std::exception_ptr> failures(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& c = cells[i];
        results[i] = rollout(cfg.environment, rules[c.policy], cfg.T, cfg.init, c.seed);
        if (write && cfg.emit_csv) {
          std::ostringstream ss;
          write_trajectory_csv(results[i], ss);
          write_text_file((fs::path(cfg.outputs) /
                           trajectory_file(cfg.policies[c.policy].name, c.seed))
                              .string(),
                          ss.str());
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::min<unsigned>(thread_cap(), static_cast<unsigned>(cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ExperimentResult out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out.trajectories.emplace(std::make_pair(cfg.policies[cells[i].policy].name, cells[i].seed),
                             std::move(results[i]));
    if (write && cfg.emit_csv) {
      out.files.push_back(trajectory_file(cfg.policies[cells[i].policy].name, cells[i].seed));
    }
  }

  Json policies = Json::object();
  for (const auto& p : cfg.policies) {
    Json runs = Json::array();
    double mean_welfare = 0.0;
    for (std::uint64_t s : cfg.seeds) {
      const Trajectory& tr = out.trajectories.at({p.name, s});
      const TrajectoryStep& last = tr.steps.back();
      runs.push_back(Json{{"seed", s},
                          {"final_welfare", last.welfare},
                          {"final_viewer_total", last.state.viewer.sum()},
                          {"final_provider_total", last.state.provider.sum()},
                          {"cumulative_welfare", tr.cumulative_welfare()}});
      mean_welfare += tr.cumulative_welfare() / tr.horizon();
    }
    policies[p.name] = Json{{"kind", p.kind},
                            {"mean_welfare", mean_welfare / static_cast<double>(cfg.seeds.size())},
                            {"runs", runs}};
  }

  Json regret = Json::object();
  if (cfg.policies.size() >= 2) {
    for (std::uint64_t s : cfg.seeds) {
      std::map<std::string, Trajectory> by_name;
      for (const auto& p : cfg.policies) by_name.emplace(p.name, out.trajectories.at({p.name, s}));
      RegretSuite suite = empirical_regret_suite(cfg.environment, by_name);
      if (write && cfg.emit_csv) {
        for (const auto& [name, report] : suite.reports) {
          std::ostringstream ss;
          write_regret_csv(report, ss);
          write_text_file((fs::path(cfg.outputs) / regret_file(name, s)).string(), ss.str());
          out.files.push_back(regret_file(name, s));
        }
      }
      regret[std::to_string(s)] = regret_summary(suite);
      out.regret.emplace(s, std::move(suite));
    }
  }

  out.summary = Json{{"T", cfg.T},
                     {"env_digest", env_digest(cfg.environment)},
                     {"seeds", cfg.seeds},
                     {"policies", policies},
                     {"regret", regret}};
  if (write && cfg.emit_summary) {
    write_text_file((fs::path(cfg.outputs) / "summary.json").string(), out.summary.dump(2) + "\n");
    out.files.push_back("summary.json");
  }
  std::sort(out.files.begin(), out.files.end());
  return out;
}

}  // namespace twoside
