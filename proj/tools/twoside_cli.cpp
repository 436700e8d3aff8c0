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

// twoside: command-line front end to the simulator, oracles and estimators.
//
// Every subcommand prints JSON on stdout (or writes to --out). Failures
// print {"error": <kind>, "message": ...} on stderr and exit with 2 for
// usage/config problems and 1 otherwise.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "twoside/analytics.hpp"
#include "twoside/dynamics.hpp"
#include "twoside/estimation.hpp"
#include "twoside/experiment.hpp"
#include "twoside/io.hpp"
#include "twoside/oracles.hpp"
#include "twoside/policies.hpp"

namespace fs = std::filesystem;
using namespace twoside;

namespace {

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

Json load_config(const Globals& g, bool required) {
  if (g.config.empty()) {
    if (required) throw ConfigError("--config is required for this subcommand");
    return Json::object();
  }
  return read_json_file(g.config);
}

// Single JSON document: to --out as a file, else stdout.
void emit(const Globals& g, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (!g.out.empty()) {
    write_text_file(g.out, text);
  } else if (!g.quiet) {
    std::cout << text;
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

Json complex_list(const std::vector<std::complex<double>>& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(Json::array({z.real(), z.imag()}));
  return a;
}

Json stability_json(const StabilityReport& r) {
  return Json{{"fixed_point", to_json(r.fixed_point)},
              {"jacobian", to_json(r.jacobian)},
              {"eigenvalues", complex_list(r.eigenvalues)},
              {"formula_eigenvalues", r.formula_eigenvalues},
              {"spectral_radius", r.spectral_radius},
              {"formula_spectral_radius", r.formula_spectral_radius},
              {"formula_mismatch", r.formula_mismatch},
              {"stable", r.stable},
              {"c1", r.c1},
              {"c2", r.c2},
              {"sufficient_condition_holds", r.sufficient_condition_holds},
              {"residual", r.residual}};
}

// Policy from config: a matrix under "policy", or {"kind": ...} resolved at
// the given state (myopic/lookahead resolve at that state).
PolicyMatrix resolve_policy(const Json& j, const EnvironmentSpec& env, const PopulationState& at) {
  if (!j.contains("policy")) return uniform_policy(env.K, env.L);
  const Json& p = j.at("policy");
  if (p.is_array()) return policy_from_json(p);
  PolicySpec spec;
  spec.name = "policy";
  spec.kind = p.at("kind").get<std::string>();
  if (p.contains("epsilon")) spec.epsilon = p.at("epsilon").get<double>();
  if (p.contains("beta")) spec.beta = p.at("beta").get<double>();
  if (p.contains("gamma")) spec.lookahead.gamma = p.at("gamma").get<double>();
  if (p.contains("iterations")) spec.lookahead.iterations = p.at("iterations").get<int>();
  if (p.contains("learning_rate")) {
    spec.lookahead.learning_rate = p.at("learning_rate").get<double>();
  }
  return make_policy_rule(spec, env)(env, at);
}

struct PresetInit {
  std::string name;
  PopulationState state;
};

std::vector<PresetInit> three_equilibria_presets() {
  const auto mk = [](double a, double b) {
    PopulationState s;
    s.viewer = Vector::Constant(1, a);
    s.provider = Vector::Constant(1, b);
    return s;
  };
  return {{"low", mk(0.0, 0.0)}, {"middle", mk(0.5, 0.5)}, {"high", mk(1.0, 1.0)}};
}

// ---------------------------------------------------------------------------

int cmd_gen(const Globals& g, const std::string& init_out) {
  SyntheticScenarioConfig cfg = synthetic_config_from_json(load_config(g, false));
  if (g.seed) cfg.seed = *g.seed;
  validate(cfg);
  const EnvironmentSpec env = gen_synthetic(cfg);
  emit(g, to_json(env));
  if (!init_out.empty()) {
    write_text_file(init_out, to_json(synthetic_initial_population(cfg)).dump(2) + "\n");
  }
  return 0;
}

int cmd_run(const Globals& g, std::optional<int> T) {
  Json j = load_config(g, true);
  if (T) j["T"] = *T;
  if (g.seed) j["seeds"] = Json::array({*g.seed});
  if (!g.out.empty()) j["outputs"] = g.out;
  const ExperimentConfig cfg = experiment_config_from_json(j);
  const ExperimentResult res = run_experiment(cfg);
  if (!g.quiet) std::cout << res.summary.dump(2) << "\n";
  return 0;
}

int cmd_fixed_point(const Globals& g, const std::string& preset, double tol) {
  EnvironmentSpec env;
  std::vector<PresetInit> inits;
  Json j = Json::object();
  if (!preset.empty()) {
    if (preset != "three-equilibria") throw ConfigError("unknown preset '" + preset + "'");
    env = three_equilibria_environment();
    inits = three_equilibria_presets();
  } else {
    j = load_config(g, true);
    env = environment_from_json(j.at("environment"));
    if (j.contains("inits")) {
      int i = 0;
      for (const auto& s : j.at("inits")) inits.push_back({std::to_string(i++), population_from_json(s)});
    } else {
      inits.push_back({"0", population_from_json(j.at("init"))});
    }
  }
  FixedPointOptions opts;
  opts.tol = tol;
  std::ostringstream lines;
  for (const auto& in : inits) {
    const PolicyMatrix pi = resolve_policy(j, env, in.state);
    Json rec{{"preset", in.name}, {"init", to_json(in.state)}, {"tol", tol}};
    try {
      const PopulationState fp = find_fixed_point(env, pi, in.state, opts);
      rec["fixed_point"] = to_json(fp);
      rec["residual"] = fixed_point_residual(env, fp, pi);
      rec["is_nash"] = is_nash_equilibrium(env, pi, fp);
      rec["converged"] = true;
    } catch (const ConvergenceError& e) {
      rec["converged"] = false;
      rec["residual"] = e.residual();
      rec["last_iterate"] = to_json(e.last_iterate());
    }
    lines << rec.dump() << "\n";
  }
  if (!g.out.empty()) {
    write_text_file(g.out, lines.str());
  } else if (!g.quiet) {
    std::cout << lines.str();
  }
  return 0;
}

int cmd_stability(const Globals& g, const std::string& preset) {
  EnvironmentSpec env;
  PopulationState init;
  Json j = Json::object();
  if (!preset.empty()) {
    if (preset != "three-equilibria") throw ConfigError("unknown preset '" + preset + "'");
    env = three_equilibria_environment();
    Json records = Json::array();
    const PolicyMatrix pi = uniform_policy(1, 1);
    for (const auto& in : three_equilibria_presets()) {
      const PopulationState fp = find_fixed_point(env, pi, in.state);
      Json r = stability_json(jacobian_eigenvalues(env, pi, fp));
      r["preset"] = in.name;
      records.push_back(r);
    }
    emit(g, records);
    return 0;
  }
  j = load_config(g, true);
  env = environment_from_json(j.at("environment"));
  init = population_from_json(j.at("init"));
  const PolicyMatrix pi = resolve_policy(j, env, init);
  const PopulationState fp = find_fixed_point(env, pi, init);
  emit(g, stability_json(jacobian_eigenvalues(env, pi, fp)));
  return 0;
}

int cmd_regret(const Globals& g) {
  const Json j = load_config(g, true);
  const EnvironmentSpec env = environment_from_json(j.at("environment"));
  std::map<std::string, Trajectory> trajs;
  for (const auto& [name, path] : j.at("trajectories").items()) {
    std::istringstream in(read_text_file(path.get<std::string>()));
    Trajectory t = read_trajectory_csv(in);
    t.env_digest = env_digest(env);
    trajs.emplace(name, std::move(t));
  }
  const RegretSuite suite = empirical_regret_suite(env, trajs);
  if (!g.out.empty()) {
    ensure_dir(g.out);
    for (const auto& [name, r] : suite.reports) {
      std::ostringstream ss;
      write_regret_csv(r, ss);
      write_text_file((fs::path(g.out) / ("regret_" + name + ".csv")).string(), ss.str());
    }
    write_text_file((fs::path(g.out) / "regret_summary.json").string(),
                    regret_summary(suite).dump(2) + "\n");
  }
  if (!g.quiet) std::cout << regret_summary(suite).dump(2) << "\n";
  return 0;
}

int cmd_estimate(const Globals& g) {
  const Json j = load_config(g, true);
  const EnvironmentSpec env = environment_from_json(j.at("environment"));
  if (j.contains("log")) {
    std::istringstream in(read_text_file(j.at("log").get<std::string>()));
    const InteractionLog log = read_interaction_log_csv(in, env.eta_viewer, env.eta_provider);
    const bool known_b = !j.contains("known_b") || j.at("known_b").get<bool>();
    emit(g, Json{{"fit", to_json(fit_dynamics(log, known_b ? env.B : Matrix()))}});
    return 0;
  }
  const PopulationState init = population_from_json(j.at("init"));
  ExploreThenCommitConfig cfg;
  if (j.contains("burn_in")) cfg.burn_in = j.at("burn_in").get<int>();
  if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<int>();
  if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
  if (j.contains("refit_every")) cfg.refit_every = j.at("refit_every").get<int>();
  if (j.contains("gamma")) cfg.lookahead.gamma = j.at("gamma").get<double>();
  if (j.contains("iterations")) cfg.lookahead.iterations = j.at("iterations").get<int>();
  if (j.contains("learning_rate")) cfg.lookahead.learning_rate = j.at("learning_rate").get<double>();
  const std::uint64_t seed = g.seed.value_or(j.value("seed", std::uint64_t{0}));
  SimulatorBlackbox box(env, init, seed);
  ExploreThenCommitResult res = explore_then_commit(box, cfg);
  res.trajectory.env_digest = env_digest(env);
  res.trajectory.seed = seed;
  Json warnings = Json::array();
  for (const auto& w : res.warnings) warnings.push_back(Json{{"t", w.t}, {"message", w.message}});
  const Json summary{{"fit", to_json(res.fit)},
                     {"warnings", warnings},
                     {"cumulative_welfare", res.trajectory.cumulative_welfare()},
                     {"final_state", to_json(box.state())}};
  if (!g.out.empty()) {
    ensure_dir(g.out);
    std::ostringstream t, l;
    write_trajectory_csv(res.trajectory, t);
    write_interaction_log_csv(res.log, l);
    write_text_file((fs::path(g.out) / "trajectory.csv").string(), t.str());
    write_text_file((fs::path(g.out) / "interactions.csv").string(), l.str());
    write_text_file((fs::path(g.out) / "fit.json").string(), summary.dump(2) + "\n");
  }
  if (!g.quiet) std::cout << summary.dump(2) << "\n";
  return 0;
}

LinearGameParams linear_params(const Json& j) {
  LinearGameParams p;
  p.a0 = j.at("a0").get<double>();
  p.a1 = j.at("a1").get<double>();
  p.a2 = j.at("a2").get<double>();
  p.b2 = j.value("b2", 0.0);
  p.B = matrix_from_json(j.at("B"));
  validate(p);
  return p;
}

int cmd_oracle_linear(const Globals& g, std::optional<double> epsilon) {
  const Json j = load_config(g, true);
  const LinearGameParams p = linear_params(j);
  const PolicyMatrix pi = epsilon ? epsilon_greedy(p.B, *epsilon)
                          : j.contains("policy") ? policy_from_json(j.at("policy"))
                                                 : epsilon_greedy(p.B, 0.0);
  const PopulationState ne = linear_ne(p, pi);
  const double w1 = linear_welfare(p, pi);
  const double w2 = linear_welfare_from_ne(p, pi);
  const EnvironmentSpec env = linear_environment(p, j.value("eta", 0.5));
  PopulationState start;
  start.viewer = Vector::Ones(env.K);
  start.provider = Vector::Ones(env.L);
  Json sim = Json::object();
  try {
    const PopulationState fp = find_fixed_point(env, pi, start, FixedPointOptions{1e-12, 1000000});
    sim = Json{{"fixed_point", to_json(fp)},
               {"welfare", welfare(env, fp, pi)},
               {"max_abs_gap",
                std::max((fp.viewer - ne.viewer).lpNorm<Eigen::Infinity>(),
                         (fp.provider - ne.provider).lpNorm<Eigen::Infinity>())}};
  } catch (const ConvergenceError& e) {
    sim = Json{{"converged", false}, {"residual", e.residual()}};
  }
  emit(g, Json{{"inputs", j},
               {"policy", to_json(pi)},
               {"ne", to_json(ne)},
               {"welfare", w1},
               {"welfare_from_ne", w2},
               {"welfare_expression_gap", std::abs(w1 - w2)},
               {"simulated", sim}});
  return 0;
}

int cmd_oracle_bounds(const Globals& g, double epsilon) {
  const Json j = load_config(g, true);
  const LinearGameParams p = linear_params(j);
  const WelfareBounds b = epsilon_welfare_bounds(p, epsilon);
  const double r = linear_welfare(p, epsilon_greedy(p.B, epsilon));
  emit(g, Json{{"inputs", j},
               {"epsilon", epsilon},
               {"g", b.g},
               {"h", b.h},
               {"lower", b.lower()},
               {"upper", b.upper()},
               {"welfare", r},
               // relative slack: the bracket is tight when K = L = 1
               {"within_bounds", b.lower() <= r * (1 + 1e-12) && r <= b.upper() * (1 + 1e-12)}});
  return 0;
}

int cmd_oracle_game(const Globals& g) {
  const Json j = load_config(g, true);
  const EnvironmentSpec env = environment_from_json(j.at("environment"));
  const PopulationState state = population_from_json(j.at("init"));
  const PolicyMatrix pi = resolve_policy(j, env, state);
  const PopulationState ga = gradient_ascent_update(env, pi, state);
  const PopulationState dm = dynamics_map(env, state, pi);
  const GameUtilities u = game_utilities(env, pi, state);
  emit(g, Json{{"inputs", j},
               {"gradient_ascent", to_json(ga)},
               {"dynamics", to_json(dm)},
               {"max_abs_gap", std::max((ga.viewer - dm.viewer).lpNorm<Eigen::Infinity>(),
                                        (ga.provider - dm.provider).lpNorm<Eigen::Infinity>())},
               {"viewer_utilities", to_json(u.u)},
               {"provider_utilities", to_json(u.v)},
               {"is_nash", is_nash_equilibrium(env, pi, state)}});
  return 0;
}

int cmd_oracle_three(const Globals& g) {
  const EnvironmentSpec env = three_equilibria_environment();
  const PolicyMatrix pi = uniform_policy(1, 1);
  Json records = Json::array();
  for (const auto& in : three_equilibria_presets()) {
    const PopulationState fp = find_fixed_point(env, pi, in.state);
    records.push_back(Json{{"preset", in.name},
                           {"init", to_json(in.state)},
                           {"fixed_point", to_json(fp)},
                           {"is_nash", is_nash_equilibrium(env, pi, fp)}});
  }
  emit(g, Json{{"equilibria", records}});
  return 0;
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided platform participation dynamics"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--seed", g.seed, "Seed override");
  app.add_flag("--quiet", g.quiet, "Suppress stdout");

  auto fallthrough = [](CLI::App* sub) { sub->fallthrough(); };

  std::string init_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic environment");
  gen->add_option("--init-out", init_out, "Also write the sampled initial population here");
  fallthrough(gen);

  std::optional<int> run_T;
  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--T", run_T, "Horizon override");
  fallthrough(run);

  std::string fp_preset;
  double fp_tol = 1e-10;
  auto* fixed = app.add_subcommand("fixed-point", "Find fixed points of the dynamics");
  fixed->add_option("--preset", fp_preset, "Built-in instance (three-equilibria)");
  fixed->add_option("--tol", fp_tol, "Residual tolerance");
  fallthrough(fixed);

  std::string st_preset;
  auto* stab = app.add_subcommand("stability", "Jacobian spectrum at a fixed point");
  stab->add_option("--preset", st_preset, "Built-in instance (three-equilibria)");
  fallthrough(stab);

  auto* regret = app.add_subcommand("regret", "Regret decomposition of trajectory CSVs");
  fallthrough(regret);

  auto* estimate = app.add_subcommand("estimate", "Fit dynamics or run explore-then-commit");
  fallthrough(estimate);

  auto* oracle = app.add_subcommand("oracle", "Closed-form reference results");
  oracle->require_subcommand(1);
  fallthrough(oracle);
  double pi11 = 1.0;
  auto* counter = oracle->add_subcommand("counterexample", "Welfare of the two-provider example");
  counter->add_option("--pi11", pi11, "Share of provider 1")->required();
  fallthrough(counter);
  std::optional<double> lin_eps;
  auto* linear = oracle->add_subcommand("linear", "Linear-case equilibrium and welfare");
  linear->add_option("--epsilon", lin_eps, "Use the epsilon-greedy policy");
  fallthrough(linear);
  double bnd_eps = 0.0;
  auto* bounds = oracle->add_subcommand("bounds", "Welfare bounds of epsilon-greedy policies");
  bounds->add_option("--epsilon", bnd_eps, "Mixing weight")->required();
  fallthrough(bounds);
  auto* game = oracle->add_subcommand("game", "Gradient-ascent identity and NE check");
  fallthrough(game);
  auto* three = oracle->add_subcommand("three-equilibria", "Fixed points of the bistable example");
  fallthrough(three);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*gen) return cmd_gen(g, init_out);
    if (*run) return cmd_run(g, run_T);
    if (*fixed) return cmd_fixed_point(g, fp_preset, fp_tol);
    if (*stab) return cmd_stability(g, st_preset);
    if (*regret) return cmd_regret(g);
    if (*estimate) return cmd_estimate(g);
    if (*counter) {
      emit(g, Json{{"inputs", {{"pi11", pi11}}}, {"r_tilde", counterexample_welfare(pi11)}});
      return 0;
    }
    if (*linear) return cmd_oracle_linear(g, lin_eps);
    if (*bounds) return cmd_oracle_bounds(g, bnd_eps);
    if (*game) return cmd_oracle_game(g);
    if (*three) return cmd_oracle_three(g);
  } catch (const ConfigError& e) {
    print_error(e.kind(), e.what());
    return 2;
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return 1;
  } catch (const Json::exception& e) {
    print_error("config", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 2;
}
