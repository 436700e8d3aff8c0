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

#include "twoside/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "twoside/io.hpp"

namespace twoside {
namespace {

void check_dims(const EnvironmentSpec& env, const PopulationState& state, const Matrix& pi) {
  if (state.viewer.size() != env.K || state.provider.size() != env.L) {
    throw DimensionError("population sizes do not match K and L");
  }
  if (pi.rows() != env.K || pi.cols() != env.L) {
    throw DimensionError("policy must be K x L");
  }
}

double max_abs_diff(const PopulationState& a, const PopulationState& b) {
  return std::max((a.viewer - b.viewer).cwiseAbs().maxCoeff(),
                  (a.provider - b.provider).cwiseAbs().maxCoeff());
}

bool complex_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

Payoffs payoffs_raw(const EnvironmentSpec& env, const PopulationState& state,
                    const Matrix& pi) {
  check_dims(env, state, pi);
  Payoffs p;
  p.q.resize(env.K, env.L);
  for (int l = 0; l < env.L; ++l) {
    const double lam = state.provider(l);
    for (int k = 0; k < env.K; ++k) p.q(k, l) = env.B(k, l) + eval(env.f[k][l], lam);
  }
  p.s = pi.cwiseProduct(p.q).rowwise().sum();
  p.e = pi.transpose() * state.viewer;
  return p;
}

Payoffs payoffs(const EnvironmentSpec& env, const PopulationState& state,
                const PolicyMatrix& pi) {
  return payoffs_raw(env, state, pi.rows());
}

double welfare(const PopulationState& state, const Payoffs& p) {
  if (state.viewer.size() != p.s.size()) throw DimensionError("welfare: K mismatch");
  return state.viewer.dot(p.s);
}

double welfare(const EnvironmentSpec& env, const PopulationState& state,
               const PolicyMatrix& pi) {
  return welfare(state, payoffs(env, state, pi));
}

namespace {

PopulationState map_with_payoffs(const EnvironmentSpec& env, const PopulationState& state,
                                 const Payoffs& p) {
  PopulationState next;
  next.t = state.t + 1;
  next.viewer.resize(env.K);
  next.provider.resize(env.L);
  for (int k = 0; k < env.K; ++k) {
    const double eta = env.eta_viewer(k);
    next.viewer(k) = (1.0 - eta) * state.viewer(k) + eta * eval(env.lambda_bar_viewer[k], p.s(k));
  }
  for (int l = 0; l < env.L; ++l) {
    const double eta = env.eta_provider(l);
    next.provider(l) =
        (1.0 - eta) * state.provider(l) + eta * eval(env.lambda_bar_provider[l], p.e(l));
  }
  return next;
}

void clip_at_zero(PopulationState& s) {
  s.viewer = s.viewer.cwiseMax(0.0);
  s.provider = s.provider.cwiseMax(0.0);
}

}  // namespace

PopulationState dynamics_map(const EnvironmentSpec& env, const PopulationState& state,
                             const PolicyMatrix& pi) {
  PopulationState next = map_with_payoffs(env, state, payoffs(env, state, pi));
  clip_at_zero(next);
  return next;
}

PopulationState step(const EnvironmentSpec& env, const PopulationState& state,
                     const PolicyMatrix& pi, Rng& rng) {
  PopulationState next = map_with_payoffs(env, state, payoffs(env, state, pi));
  if (env.noise && env.noise->relative_std > 0.0) {
    std::normal_distribution<double> xi(0.0, env.noise->relative_std);
    for (int k = 0; k < env.K; ++k) next.viewer(k) *= 1.0 + xi(rng);
    for (int l = 0; l < env.L; ++l) next.provider(l) *= 1.0 + xi(rng);
  }
  clip_at_zero(next);
  return next;
}

double Trajectory::cumulative_welfare() const {
  double acc = 0.0;
  for (const auto& s : steps) acc += s.welfare;
  return acc;
}

PolicyRule constant_rule(PolicyMatrix pi) {
  return [pi = std::move(pi)](const EnvironmentSpec&, const PopulationState&) { return pi; };
}

Trajectory rollout(const EnvironmentSpec& env, const PolicyRule& rule, int T,
                   const PopulationState& init, std::uint64_t seed) {
  if (T < 1) throw ConfigError("rollout horizon must be >= 1");
  validate(env, init);
  Trajectory traj;
  traj.env_digest = env_digest(env);
  traj.seed = seed;
  traj.steps.reserve(static_cast<std::size_t>(T));
  Rng rng(seed);
  PopulationState state = init;
  for (int i = 0; i < T; ++i) {
    PolicyMatrix pi = rule(env, state);
    if (pi.K() != env.K || pi.L() != env.L) {
      throw ValidationError("policy rule returned a policy of the wrong shape");
    }
    TrajectoryStep rec;
    rec.state = state;
    rec.payoffs = payoffs(env, state, pi);
    rec.welfare = welfare(state, rec.payoffs);
    PopulationState next = step(env, state, pi, rng);
    rec.policy = std::move(pi);
    traj.steps.push_back(std::move(rec));
    state = std::move(next);
  }
  return traj;
}

Trajectory rollout(const EnvironmentSpec& env, const PolicyRule& rule, int T,
                   const PopulationState& init) {
  return rollout(env, rule, T, init, env.seed);
}

std::uint64_t env_digest(const EnvironmentSpec& env) {
  const std::string text = to_json(env).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------

double fixed_point_residual(const EnvironmentSpec& env, const PopulationState& state,
                            const PolicyMatrix& pi) {
  return max_abs_diff(state, dynamics_map(env, state, pi));
}

PopulationState find_fixed_point(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                 const PopulationState& init, const FixedPointOptions& opts) {
  validate(env, init);
  PopulationState x = init;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opts.max_iter; ++it) {
    PopulationState next = dynamics_map(env, x, pi);
    residual = max_abs_diff(x, next);
    if (!std::isfinite(residual)) break;
    if (residual <= opts.tol) {
      x.t = init.t;
      return x;
    }
    next.t = x.t;
    x = std::move(next);
  }
  std::ostringstream os;
  os.precision(6);
  os << "fixed-point iteration did not converge within " << opts.max_iter
     << " iterations (residual " << residual << ")";
  throw ConvergenceError(os.str(), x, residual);
}

std::vector<PopulationState> find_fixed_points(const EnvironmentSpec& env,
                                               const PolicyMatrix& pi,
                                               const std::vector<PopulationState>& inits,
                                               const FixedPointOptions& opts) {
  std::vector<PopulationState> found;
  for (const auto& init : inits) {
    PopulationState fp;
    try {
      fp = find_fixed_point(env, pi, init, opts);
    } catch (const ConvergenceError&) {
      continue;
    }
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const PopulationState& q) {
      return max_abs_diff(fp, q) <= 10.0 * opts.tol;
    });
    if (!duplicate) found.push_back(std::move(fp));
  }
  return found;
}

// ---------------------------------------------------------------------------

Matrix dynamics_jacobian(const EnvironmentSpec& env, const PolicyMatrix& pi,
                         const PopulationState& at) {
  const Payoffs p = payoffs(env, at, pi);
  const int K = env.K;
  const int L = env.L;
  Matrix J = Matrix::Zero(K + L, K + L);
  for (int k = 0; k < K; ++k) {
    J(k, k) = 1.0 - env.eta_viewer(k);
    const double dv = env.eta_viewer(k) * eval_deriv(env.lambda_bar_viewer[k], p.s(k));
    for (int l = 0; l < L; ++l) {
      J(k, K + l) = dv * pi(k, l) * eval_deriv(env.f[k][l], at.provider(l));
    }
  }
  for (int l = 0; l < L; ++l) {
    J(K + l, K + l) = 1.0 - env.eta_provider(l);
    const double dc = env.eta_provider(l) * eval_deriv(env.lambda_bar_provider[l], p.e(l));
    for (int k = 0; k < K; ++k) J(K + l, k) = dc * pi(k, l);
  }
  return J;
}

double sorted_spectrum_gap(std::vector<std::complex<double>> a,
                           std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end(), complex_less);
  std::sort(b.begin(), b.end(), complex_less);
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

StabilityReport jacobian_eigenvalues(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                     const PopulationState& at, double tol) {
  StabilityReport r;
  r.residual = fixed_point_residual(env, at, pi);
  if (!(r.residual <= 10.0 * tol)) {
    std::ostringstream os;
    os << "point is not a fixed point: residual " << r.residual << " > " << 10.0 * tol;
    throw PreconditionError(os.str());
  }
  r.fixed_point = at;
  r.jacobian = dynamics_jacobian(env, pi, at);

  const Payoffs p = payoffs(env, at, pi);
  std::vector<double> dv(env.K), dc(env.L);
  for (int k = 0; k < env.K; ++k) dv[k] = eval_deriv(env.lambda_bar_viewer[k], p.s(k));
  for (int l = 0; l < env.L; ++l) dc[l] = eval_deriv(env.lambda_bar_provider[l], p.e(l));

  for (int k = 0; k < env.K; ++k) r.formula_eigenvalues.push_back(1.0 - env.eta_viewer(k));
  for (int l = 0; l < env.L; ++l) {
    const double eta_l = env.eta_provider(l);
    double acc = 0.0;
    for (int k = 0; k < env.K; ++k) {
      acc += env.eta_viewer(k) * dv[k] * pi(k, l) * eval_deriv(env.f[k][l], at.provider(l));
    }
    r.formula_eigenvalues.push_back(eta_l * (1.0 - eta_l) * dc[l] * acc);
  }

  Eigen::EigenSolver<Matrix> solver(r.jacobian, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error("numeric", "eigen-decomposition failed");
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    r.eigenvalues.push_back(solver.eigenvalues()(i));
    r.spectral_radius = std::max(r.spectral_radius, std::abs(solver.eigenvalues()(i)));
  }
  for (double mu : r.formula_eigenvalues) {
    r.formula_spectral_radius = std::max(r.formula_spectral_radius, std::abs(mu));
  }
  std::vector<std::complex<double>> formula(r.formula_eigenvalues.begin(),
                                            r.formula_eigenvalues.end());
  r.formula_mismatch = sorted_spectrum_gap(formula, r.eigenvalues);
  r.stable = r.spectral_radius < 1.0;

  for (int k = 0; k < env.K; ++k) r.c2 = std::max(r.c2, dv[k]);
  for (int l = 0; l < env.L; ++l) {
    for (int k = 0; k < env.K; ++k) {
      r.c1 = std::max(r.c1, dc[l] * eval_deriv(env.f[k][l], at.provider(l)));
    }
  }
  r.sufficient_condition_holds = check_sufficient_stability(env, pi, r.c1, r.c2);
  return r;
}

bool check_sufficient_stability(const EnvironmentSpec& env, const PolicyMatrix& pi,
                                double C1, double C2) {
  const double eta = env.eta_viewer.maxCoeff();
  const double denom = eta * C1 * C2;
  if (denom <= 0.0) return true;
  const double bound = 4.0 / denom;
  const Vector col_sums = pi.rows().colwise().sum().transpose();
  return (col_sums.array() <= bound).all();
}

std::vector<std::complex<double>> block_reduced_eigenvalues(const EnvironmentSpec& env,
                                                            const PolicyMatrix& pi,
                                                            const PopulationState& at) {
  const double eta_u = env.eta_viewer(0);
  const double eta_c = env.eta_provider(0);
  if ((env.eta_viewer.array() != eta_u).any() || (env.eta_provider.array() != eta_c).any()) {
    throw PreconditionError("block reduction requires homogeneous rates on each side");
  }
  const int K = env.K;
  const int L = env.L;
  const Matrix J = dynamics_jacobian(env, pi, at);
  const Matrix X = J.block(0, K, K, L);
  const Matrix Y = J.block(K, 0, L, K);
  const double a = 1.0 - eta_u;
  const double c = 1.0 - eta_c;
  const Matrix product = (K >= L) ? Matrix(Y * X) : Matrix(X * Y);
  Eigen::EigenSolver<Matrix> solver(product, false);
  std::vector<std::complex<double>> out;
  const std::complex<double> half_diff((a - c) / 2.0, 0.0);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const std::complex<double> nu = solver.eigenvalues()(i);
    const std::complex<double> root = std::sqrt(half_diff * half_diff + nu);
    out.push_back((a + c) / 2.0 + root);
    out.push_back((a + c) / 2.0 - root);
  }
  for (int i = 0; i < std::abs(K - L); ++i) out.emplace_back(K > L ? a : c, 0.0);
  return out;
}

}  // namespace twoside
