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

// Python bindings. Environments cross the boundary as JSON text; vectors,
// matrices and policies as numpy arrays.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "twoside/analytics.hpp"
#include "twoside/estimation.hpp"
#include "twoside/experiment.hpp"
#include "twoside/io.hpp"
#include "twoside/oracles.hpp"
#include "twoside/policies.hpp"

namespace py = pybind11;
using namespace twoside;

namespace {

PolicyMatrix as_policy(const Matrix& m) { return validate_policy(m); }

PopulationState make_state(const Vector& viewer, const Vector& provider, int t) {
  PopulationState s;
  s.t = t;
  s.viewer = viewer;
  s.provider = provider;
  return s;
}

PolicyRule rule_from(const EnvironmentSpec& env, const py::object& policy) {
  if (py::isinstance<py::str>(policy)) {
    PolicySpec spec;
    spec.kind = policy.cast<std::string>();
    spec.name = spec.kind;
    return make_policy_rule(spec, env);
  }
  return constant_rule(as_policy(policy.cast<Matrix>()));
}

py::dict trajectory_dict(const Trajectory& tr) {
  const int T = tr.horizon();
  const int K = T ? static_cast<int>(tr.steps[0].state.viewer.size()) : 0;
  const int L = T ? static_cast<int>(tr.steps[0].state.provider.size()) : 0;
  Matrix u(T, K), c(T, L), s(T, K), e(T, L);
  Vector w(T);
  for (int t = 0; t < T; ++t) {
    const TrajectoryStep& st = tr.steps[t];
    u.row(t) = st.state.viewer.transpose();
    c.row(t) = st.state.provider.transpose();
    s.row(t) = st.payoffs.s.transpose();
    e.row(t) = st.payoffs.e.transpose();
    w(t) = st.welfare;
  }
  py::dict d;
  d["lambda_viewer"] = u;
  d["lambda_provider"] = c;
  d["s"] = s;
  d["e"] = e;
  d["welfare"] = w;
  return d;
}

LinearGameParams linear_params(double a0, double a1, double a2, double b2, const Matrix& B) {
  LinearGameParams p;
  p.a0 = a0;
  p.a1 = a1;
  p.a2 = a2;
  p.b2 = b2;
  p.B = B;
  validate(p);
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-sided platform population dynamics";

  static py::exception<Error> error_type(m, "TwosideError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type.ptr(), (e.kind() + ": " + e.what()).c_str());
    }
  });

  py::class_<EnvironmentSpec>(m, "Environment")
      .def_static("from_json", [](const std::string& s) { return environment_from_json(Json::parse(s)); })
      .def("to_json", [](const EnvironmentSpec& e) { return to_json(e).dump(); })
      .def_readonly("K", &EnvironmentSpec::K)
      .def_readonly("L", &EnvironmentSpec::L)
      .def_readonly("B", &EnvironmentSpec::B)
      .def("digest", [](const EnvironmentSpec& e) { return env_digest(e); });

  py::class_<PopulationState>(m, "State")
      .def(py::init(&make_state), py::arg("viewer"), py::arg("provider"), py::arg("t") = 0)
      .def_readwrite("t", &PopulationState::t)
      .def_readwrite("viewer", &PopulationState::viewer)
      .def_readwrite("provider", &PopulationState::provider)
      .def("__repr__", [](const PopulationState& s) { return "State(" + to_json(s).dump() + ")"; });

  m.def("validate_policy", [](const Matrix& pi) { return as_policy(pi).rows(); });
  m.def("uniform_policy", [](int K, int L) { return uniform_policy(K, L).rows(); });
  m.def("epsilon_greedy", [](const Matrix& B, double eps) { return epsilon_greedy(B, eps).rows(); });
  m.def("myopic_greedy", [](const EnvironmentSpec& env, const PopulationState& s) {
    return myopic_greedy(env, s).rows();
  });
  m.def("softmax_myopic", [](const EnvironmentSpec& env, const Vector& e, double gamma) {
    return softmax_myopic(env, e, gamma).rows();
  });
  m.def("interpolate", [](const Matrix& a, const Matrix& b, double beta) {
    return interpolate(as_policy(a), as_policy(b), beta).rows();
  });

  m.def("payoffs", [](const EnvironmentSpec& env, const PopulationState& s, const Matrix& pi) {
    const Payoffs p = payoffs(env, s, as_policy(pi));
    py::dict d;
    d["s"] = p.s;
    d["e"] = p.e;
    d["q"] = p.q;
    return d;
  });
  m.def("welfare", [](const EnvironmentSpec& env, const PopulationState& s, const Matrix& pi) {
    return welfare(env, s, as_policy(pi));
  });
  m.def("dynamics_map", [](const EnvironmentSpec& env, const PopulationState& s, const Matrix& pi) {
    return dynamics_map(env, s, as_policy(pi));
  });
  m.def("step", [](const EnvironmentSpec& env, const PopulationState& s, const Matrix& pi, std::uint64_t seed) {
    Rng rng(seed);
    return step(env, s, as_policy(pi), rng);
  }, py::arg("env"), py::arg("state"), py::arg("pi"), py::arg("seed") = 0);
  m.def("rollout", [](const EnvironmentSpec& env, const py::object& policy, int T,
                      const PopulationState& init, std::uint64_t seed) {
    return trajectory_dict(rollout(env, rule_from(env, policy), T, init, seed));
  }, py::arg("env"), py::arg("policy"), py::arg("T"), py::arg("init"), py::arg("seed") = 0);

  m.def("find_fixed_point", [](const EnvironmentSpec& env, const Matrix& pi, const PopulationState& init,
                               double tol, int max_iter) {
    return find_fixed_point(env, as_policy(pi), init, FixedPointOptions{tol, max_iter});
  }, py::arg("env"), py::arg("pi"), py::arg("init"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100000);
  m.def("stability", [](const EnvironmentSpec& env, const Matrix& pi, const PopulationState& at) {
    const StabilityReport r = jacobian_eigenvalues(env, as_policy(pi), at);
    py::dict d;
    d["jacobian"] = r.jacobian;
    d["eigenvalues"] = r.eigenvalues;
    d["formula_eigenvalues"] = r.formula_eigenvalues;
    d["spectral_radius"] = r.spectral_radius;
    d["formula_mismatch"] = r.formula_mismatch;
    d["stable"] = r.stable;
    d["sufficient_condition_holds"] = r.sufficient_condition_holds;
    d["residual"] = r.residual;
    return d;
  });

  m.def("game_utilities", [](const EnvironmentSpec& env, const Matrix& pi, const PopulationState& s) {
    const GameUtilities g = game_utilities(env, as_policy(pi), s);
    return py::make_tuple(g.u, g.v);
  });
  m.def("gradient_ascent_update", [](const EnvironmentSpec& env, const Matrix& pi, const PopulationState& s) {
    return gradient_ascent_update(env, as_policy(pi), s);
  });
  m.def("is_nash_equilibrium", [](const EnvironmentSpec& env, const Matrix& pi, const PopulationState& s) {
    return is_nash_equilibrium(env, as_policy(pi), s);
  });

  m.def("lookahead_objective", [](const EnvironmentSpec& env, const PopulationState& s, const Matrix& pi,
                                  double gamma) { return lookahead_objective(env, s, as_policy(pi), gamma); });
  m.def("lookahead_gradient", [](const EnvironmentSpec& env, const PopulationState& s, const Matrix& pi,
                                 double gamma) { return lookahead_gradient(env, s, as_policy(pi), gamma); });
  m.def("optimize_lookahead", [](const EnvironmentSpec& env, const PopulationState& s, double gamma,
                                 int iterations, double learning_rate) {
    LookaheadConfig cfg;
    cfg.gamma = gamma;
    cfg.iterations = iterations;
    cfg.learning_rate = learning_rate;
    return optimize_lookahead(env, s, cfg).rows();
  }, py::arg("env"), py::arg("state"), py::arg("gamma") = 10.0, py::arg("iterations") = 100,
        py::arg("learning_rate") = 0.05);

  m.def("linear_ne", [](double a0, double a1, double a2, double b2, const Matrix& B, const Matrix& pi) {
    return linear_ne(linear_params(a0, a1, a2, b2, B), as_policy(pi));
  });
  m.def("linear_welfare", [](double a0, double a1, double a2, double b2, const Matrix& B, const Matrix& pi) {
    return linear_welfare(linear_params(a0, a1, a2, b2, B), as_policy(pi));
  });
  m.def("linear_environment", [](double a0, double a1, double a2, double b2, const Matrix& B, double eta) {
    return linear_environment(linear_params(a0, a1, a2, b2, B), eta);
  }, py::arg("a0"), py::arg("a1"), py::arg("a2"), py::arg("b2"), py::arg("B"), py::arg("eta") = 1.0);
  m.def("epsilon_welfare_bounds", [](double a0, double a1, double a2, double b2, const Matrix& B, double eps) {
    const WelfareBounds b = epsilon_welfare_bounds(linear_params(a0, a1, a2, b2, B), eps);
    return py::make_tuple(b.g, b.h);
  });
  m.def("counterexample_welfare", &counterexample_welfare);
  m.def("counterexample_environment", &counterexample_environment, py::arg("eta") = 1.0);
  m.def("three_equilibria_environment", &three_equilibria_environment, py::arg("eta") = 0.5);

  m.def("recover_reference", &recover_reference);
  m.def("fit_saturating_exp", [](const std::vector<std::pair<double, double>>& pts) {
    const CurveFit f = fit_saturating_exp(pts);
    py::dict d;
    d["a0"] = f.params.a0;
    d["a1"] = f.params.a1;
    d["a2"] = f.params.a2;
    d["a3"] = f.params.a3;
    d["rmse"] = f.rmse;
    return d;
  });

  m.def("gen_synthetic", [](const std::string& cfg) {
    return gen_synthetic(synthetic_config_from_json(Json::parse(cfg)));
  });
  m.def("synthetic_initial_population", [](const std::string& cfg) {
    return synthetic_initial_population(synthetic_config_from_json(Json::parse(cfg)));
  });
  m.def("run_experiment", [](const std::string& cfg) {
    const ExperimentConfig c = experiment_config_from_json(Json::parse(cfg));
    py::gil_scoped_release release;
    return run_experiment(c).summary.dump();
  });
}
