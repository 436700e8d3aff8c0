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

// Random instance generators shared by the unit and acceptance suites.

#ifndef TWOSIDE_TESTS_INSTANCES_HPP_
#define TWOSIDE_TESTS_INSTANCES_HPP_

#include <random>

#include "twoside/dynamics.hpp"
#include "twoside/model.hpp"
#include "twoside/oracles.hpp"

namespace twoside::testing {

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ScalarFn random_effect(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return Linear{uniform(rng, 0.0, 1.0), 0.0};
    case 1:
      return SigmoidHalf{uniform(rng, 0.5, 3.0), uniform(rng, 0.5, 3.0)};
    default:
      return SaturatingExp{uniform(rng, 0.5, 2.0), uniform(rng, 0.2, 2.0), 0.0, 0.0};
  }
}

inline ScalarFn random_reference(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return Linear{uniform(rng, 0.1, 1.0), uniform(rng, 0.0, 0.5)};
    case 1:
      return SigmoidHalf{uniform(rng, 1.0, 4.0), uniform(rng, 0.5, 2.0)};
    default:
      return ScaledLogistic{uniform(rng, 1.0, 3.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 1.0)};
  }
}

inline EnvironmentSpec random_smooth_env(Rng& rng, int K, int L) {
  EnvironmentSpec env;
  env.K = K;
  env.L = L;
  env.B = Matrix(K, L);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) env.B(k, l) = uniform(rng, 0.0, 1.0);
  }
  env.f.resize(K);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) env.f[k].push_back(random_effect(rng));
  }
  for (int k = 0; k < K; ++k) env.lambda_bar_viewer.push_back(random_reference(rng));
  for (int l = 0; l < L; ++l) env.lambda_bar_provider.push_back(random_reference(rng));
  env.eta_viewer = Vector(K);
  env.eta_provider = Vector(L);
  for (int k = 0; k < K; ++k) env.eta_viewer(k) = uniform(rng, 0.05, 1.0);
  for (int l = 0; l < L; ++l) env.eta_provider(l) = uniform(rng, 0.05, 1.0);
  validate(env);
  return env;
}

inline PopulationState random_state(Rng& rng, int K, int L, double lo = 0.1, double hi = 3.0) {
  PopulationState s;
  s.viewer = Vector(K);
  s.provider = Vector(L);
  for (int k = 0; k < K; ++k) s.viewer(k) = uniform(rng, lo, hi);
  for (int l = 0; l < L; ++l) s.provider(l) = uniform(rng, lo, hi);
  return s;
}

// Row-normalized exponentials: interior of the simplex.
inline PolicyMatrix random_policy(Rng& rng, int K, int L) {
  Matrix m(K, L);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) m(k, l) = std::exp(uniform(rng, -1.5, 1.5));
    m.row(k) /= m.row(k).sum();
  }
  return validate_policy(m);
}

// Linear instance whose system matrix stays well inside the admissible set:
// a0 a1 a2 K < 0.8 bounds the spectral radius of a pi pi^T by 0.8.
inline LinearGameParams random_linear(Rng& rng, int K, int L) {
  LinearGameParams p;
  const double target = uniform(rng, 0.1, 0.8) / K;
  p.a0 = uniform(rng, 0.3, 1.0);
  p.a1 = uniform(rng, 0.3, 1.0);
  p.a2 = target / (p.a0 * p.a1);
  p.b2 = uniform(rng, 0.0, 1.0);
  p.B = Matrix(K, L);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) p.B(k, l) = uniform(rng, 0.0, 1.0);
  }
  return p;
}

}  // namespace twoside::testing

#endif  // TWOSIDE_TESTS_INSTANCES_HPP_
