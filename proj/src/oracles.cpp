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

#include "twoside/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace twoside {

GameUtilities game_utilities(const EnvironmentSpec& env, const PolicyMatrix& pi,
                             const PopulationState& state) {
  const Payoffs p = payoffs(env, state, pi);
  GameUtilities g;
  g.u.resize(env.K);
  g.v.resize(env.L);
  for (int k = 0; k < env.K; ++k) {
    const double lam = state.viewer(k);
    g.u(k) = lam * eval(env.lambda_bar_viewer[k], p.s(k)) - 0.5 * lam * lam;
  }
  for (int l = 0; l < env.L; ++l) {
    const double lam = state.provider(l);
    g.v(l) = lam * eval(env.lambda_bar_provider[l], p.e(l)) - 0.5 * lam * lam;
  }
  return g;
}

// s_k does not depend on lambda_k and e_l does not depend on lambda_l, so
// each own-strategy partial is lbar(.) - lambda.
GameUtilities game_utility_gradients(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                     const PopulationState& state) {
  const Payoffs p = payoffs(env, state, pi);
  GameUtilities g;
  g.u.resize(env.K);
  g.v.resize(env.L);
  for (int k = 0; k < env.K; ++k) {
    g.u(k) = eval(env.lambda_bar_viewer[k], p.s(k)) - state.viewer(k);
  }
  for (int l = 0; l < env.L; ++l) {
    g.v(l) = eval(env.lambda_bar_provider[l], p.e(l)) - state.provider(l);
  }
  return g;
}

PopulationState gradient_ascent_update(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                       const PopulationState& state) {
  const GameUtilities grad = game_utility_gradients(env, pi, state);
  PopulationState next;
  next.t = state.t + 1;
  next.viewer = (state.viewer + env.eta_viewer.cwiseProduct(grad.u)).cwiseMax(0.0);
  next.provider = (state.provider + env.eta_provider.cwiseProduct(grad.v)).cwiseMax(0.0);
  return next;
}

bool is_nash_equilibrium(const EnvironmentSpec& env, const PolicyMatrix& pi,
                         const PopulationState& state, const std::vector<double>& deltas,
                         double slack) {
  const GameUtilities base = game_utilities(env, pi, state);
  for (int i = 0; i < env.K + env.L; ++i) {
    const bool viewer = i < env.K;
    const int idx = viewer ? i : i - env.K;
    const double own = viewer ? state.viewer(idx) : state.provider(idx);
    const double here = viewer ? base.u(idx) : base.v(idx);
    for (double d : deltas) {
      for (double sign : {-1.0, 1.0}) {
        const double moved = own + sign * d;
        if (moved < 0.0) continue;
        PopulationState dev = state;
        (viewer ? dev.viewer(idx) : dev.provider(idx)) = moved;
        const GameUtilities g = game_utilities(env, pi, dev);
        const double there = viewer ? g.u(idx) : g.v(idx);
        if (there > here + slack) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

void validate(const LinearGameParams& p) {
  if (!(p.a0 > 0.0 && p.a1 > 0.0 && p.a2 > 0.0)) {
    throw OracleDomainError("linear game requires a0, a1, a2 > 0");
  }
  if (p.B.rows() < 1 || p.B.cols() < 1 || !p.B.allFinite()) {
    throw OracleDomainError("linear game requires a finite non-empty B");
  }
}

EnvironmentSpec linear_environment(const LinearGameParams& p, double eta) {
  validate(p);
  EnvironmentSpec env;
  env.K = static_cast<int>(p.B.rows());
  env.L = static_cast<int>(p.B.cols());
  env.B = p.B;
  env.f.assign(env.K, std::vector<ScalarFn>(env.L, Linear{p.a0, 0.0}));
  env.lambda_bar_viewer.assign(env.K, Linear{p.a1, 0.0});
  env.lambda_bar_provider.assign(env.L, Linear{p.a2, p.b2});
  env.eta_viewer = Vector::Constant(env.K, eta);
  env.eta_provider = Vector::Constant(env.L, eta);
  twoside::validate(env);
  return env;
}

Matrix linear_system_matrix(const LinearGameParams& p, const PolicyMatrix& pi) {
  const Matrix& P = pi.rows();
  const auto K = P.rows();
  return Matrix::Identity(K, K) - p.a0 * p.a1 * p.a2 * P * P.transpose();
}

namespace {

Vector linear_rhs(const LinearGameParams& p, const PolicyMatrix& pi) {
  const Matrix& P = pi.rows();
  const Vector diag = P.cwiseProduct(p.B).rowwise().sum();
  return diag + Vector::Constant(P.rows(), p.a0 * p.b2);
}

// M^{-1} rhs via Cholesky; rejects non-positive-definite M.
Vector solve_pd(const LinearGameParams& p, const PolicyMatrix& pi) {
  validate(p);
  if (pi.K() != p.B.rows() || pi.L() != p.B.cols()) {
    throw DimensionError("policy shape does not match B");
  }
  const Matrix M = linear_system_matrix(p, pi);
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw OracleDomainError("I - a0 a1 a2 pi pi^T is not positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 1e-12) {
    throw OracleDomainError("I - a0 a1 a2 pi pi^T is numerically singular");
  }
  return llt.solve(linear_rhs(p, pi));
}

}  // namespace

PopulationState linear_ne(const LinearGameParams& p, const PolicyMatrix& pi) {
  const Vector w = solve_pd(p, pi);
  PopulationState s;
  s.viewer = p.a1 * w;
  const Vector exposure = pi.rows().transpose() * s.viewer;
  s.provider = (p.a2 * exposure).array() + p.b2;
  return s;
}

double linear_welfare(const LinearGameParams& p, const PolicyMatrix& pi) {
  return p.a1 * solve_pd(p, pi).squaredNorm();
}

double linear_welfare_from_ne(const LinearGameParams& p, const PolicyMatrix& pi) {
  return linear_ne(p, pi).viewer.squaredNorm() / p.a1;
}

int largest_greedy_cluster(const Matrix& B) {
  std::map<int, int> counts;
  for (Eigen::Index k = 0; k < B.rows(); ++k) ++counts[argmax_lowest(B.row(k))];
  int best = 0;
  for (const auto& [col, n] : counts) best = std::max(best, n);
  return best;
}

WelfareBounds epsilon_welfare_bounds(const LinearGameParams& p, double epsilon) {
  validate(p);
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  const auto K = static_cast<double>(p.B.rows());
  const auto L = static_cast<double>(p.B.cols());
  const double a = p.a0 * p.a1 * p.a2;
  const int K1 = largest_greedy_cluster(p.B);
  if (!(a * K1 < 1.0)) throw OracleDomainError("bounds require a0 a1 a2 K1 < 1");

  const Vector b0 = p.B.rowwise().maxCoeff();
  const Vector b1 = p.B.rowwise().mean();
  const Vector v = ((1.0 - epsilon) * b0 + epsilon * b1).array() + p.a0 * p.b2;
  WelfareBounds out;
  out.g = p.a1 * v.squaredNorm();
  const double denom = 1.0 - a * K1 + a * epsilon * (2.0 - epsilon) * (K1 - K / L);
  if (!(denom > 0.0)) throw OracleDomainError("bound denominator is not positive");
  out.h = 1.0 / (denom * denom);
  return out;
}

// ---------------------------------------------------------------------------

double counterexample_welfare(double pi11) {
  if (!(pi11 >= 0.0 && pi11 <= 1.0)) throw DomainError("pi11 must lie in [0, 1]");
  const double rest = 1.0 - pi11;
  return (0.9 + 0.1 * pi11) / (1.0 - 0.4 * rest * rest);
}

EnvironmentSpec counterexample_environment(double eta) {
  EnvironmentSpec env;
  env.K = 1;
  env.L = 2;
  env.B = Matrix(1, 2);
  env.B << 1.0, 0.9;
  env.f = {{constant_fn(0.0), Linear{0.4, 0.0}}};
  env.lambda_bar_viewer = {identity_fn()};
  env.lambda_bar_provider = {identity_fn(), identity_fn()};
  env.eta_viewer = Vector::Constant(1, eta);
  env.eta_provider = Vector::Constant(2, eta);
  validate(env);
  return env;
}

EnvironmentSpec three_equilibria_environment(double eta) {
  EnvironmentSpec env;
  env.K = 1;
  env.L = 1;
  env.B = Matrix::Zero(1, 1);
  env.f = {{identity_fn()}};
  env.lambda_bar_viewer = {ScaledLogistic{1.0, 8.0, 0.5}};
  env.lambda_bar_provider = {ScaledLogistic{1.0, 6.0, 0.5}};
  env.eta_viewer = Vector::Constant(1, eta);
  env.eta_provider = Vector::Constant(1, eta);
  validate(env);
  return env;
}

}  // namespace twoside
