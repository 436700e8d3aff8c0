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

#include "twoside/policies.hpp"

#include <cmath>
#include <sstream>

namespace twoside {

PolicyMatrix uniform_policy(int K, int L) {
  if (K < 1 || L < 1) throw ConfigError("uniform_policy requires K, L >= 1");
  return validate_policy(Matrix::Constant(K, L, 1.0 / static_cast<double>(L)), false);
}

PolicyMatrix myopic_greedy(const EnvironmentSpec& env, const PopulationState& state) {
  Matrix m = Matrix::Zero(env.K, env.L);
  Eigen::RowVectorXd q(env.L);
  for (int k = 0; k < env.K; ++k) {
    for (int l = 0; l < env.L; ++l) q(l) = env.B(k, l) + eval(env.f[k][l], state.provider(l));
    m(k, argmax_lowest(q)) = 1.0;
  }
  return validate_policy(m, false);
}

Matrix row_softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index k = 0; k < logits.rows(); ++k) {
    const double mx = logits.row(k).maxCoeff();
    out.row(k) = (logits.row(k).array() - mx).exp().matrix();
    out.row(k) /= out.row(k).sum();
  }
  return out;
}

namespace {

// Reference utilities b_kl + f_kl(lbar_l(e_l)) for the given exposure.
Matrix reference_utilities(const EnvironmentSpec& env, const Vector& exposure,
                           Vector* provider_reference = nullptr) {
  Matrix qbar(env.K, env.L);
  Vector rc(env.L);
  for (int l = 0; l < env.L; ++l) {
    rc(l) = eval(env.lambda_bar_provider[l], exposure(l));
    for (int k = 0; k < env.K; ++k) qbar(k, l) = env.B(k, l) + eval(env.f[k][l], rc(l));
  }
  if (provider_reference) *provider_reference = rc;
  return qbar;
}

// Intermediate quantities of the look-ahead composite.
struct Composite {
  Payoffs current;   // s, e, q at the current population
  Vector ru;         // lbar_k(s_k)
  Vector rc;         // lbar_l(e_l)
  Matrix qbar;       // b + f(rc)
  Matrix pbar;       // softmax(gamma qbar)
  Vector avg;        // sum_l pbar_kl qbar_kl
  double value = 0.0;
};

Composite evaluate_composite(const EnvironmentSpec& env, const PopulationState& state,
                             const Matrix& pi, double gamma) {
  Composite c;
  c.current = payoffs_raw(env, state, pi);
  c.ru.resize(env.K);
  for (int k = 0; k < env.K; ++k) c.ru(k) = eval(env.lambda_bar_viewer[k], c.current.s(k));
  c.qbar = reference_utilities(env, c.current.e, &c.rc);
  c.pbar = row_softmax(gamma * c.qbar);
  c.avg = c.pbar.cwiseProduct(c.qbar).rowwise().sum();
  c.value = c.ru.dot(c.avg);
  return c;
}

}  // namespace

PolicyMatrix softmax_myopic(const EnvironmentSpec& env, const Vector& reference_exposure,
                            double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  if (reference_exposure.size() != env.L) throw DimensionError("exposure must have L entries");
  return validate_policy(row_softmax(gamma * reference_utilities(env, reference_exposure)));
}

void validate(const LookaheadConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) throw ConfigError("gamma must be > 0");
  if (cfg.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ConfigError("learning_rate must be finite and >= 0");
  }
  if (cfg.grad_check && !(cfg.grad_check->h > 0.0 && cfg.grad_check->tol > 0.0)) {
    throw ConfigError("grad_check requires h > 0 and tol > 0");
  }
}

double lookahead_objective_raw(const EnvironmentSpec& env, const PopulationState& state,
                               const Matrix& pi, double gamma) {
  return evaluate_composite(env, state, pi, gamma).value;
}

double lookahead_objective(const EnvironmentSpec& env, const PopulationState& state,
                           const PolicyMatrix& pi, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  return lookahead_objective_raw(env, state, pi.rows(), gamma);
}

Matrix lookahead_gradient_fd(const EnvironmentSpec& env, const PopulationState& state,
                             const Matrix& pi, double gamma, double h) {
  Matrix g(pi.rows(), pi.cols());
  Matrix probe = pi;
  for (Eigen::Index k = 0; k < pi.rows(); ++k) {
    for (Eigen::Index l = 0; l < pi.cols(); ++l) {
      probe(k, l) = pi(k, l) + h;
      const double up = lookahead_objective_raw(env, state, probe, gamma);
      probe(k, l) = pi(k, l) - h;
      const double down = lookahead_objective_raw(env, state, probe, gamma);
      probe(k, l) = pi(k, l);
      g(k, l) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

// Chain rule through three paths from pi_{k'l'}:
//   s_{k'}  -> lbar_{k'}                      (reference viewer population)
//   e_{l'}  -> lbar_{l'} -> f_{k l'}          (reference utility, value term)
//   e_{l'}  -> lbar_{l'} -> f_{k l'} -> pbar  (softmax policy term)
// which gives
//   G_{k'l'} = lbar_{k'}'(s_{k'}) q_{k'l'} avg_{k'}
//            + lbar_{l'}'(e_{l'}) lambda_{k'}
//              * sum_k ru_k pbar_{kl'} f_{kl'}'(rc_{l'}) (1 + gamma (qbar_{kl'} - avg_k)).
Matrix lookahead_gradient_raw(const EnvironmentSpec& env, const PopulationState& state,
                              const Matrix& pi, double gamma) {
  if (!env.all_smooth()) return lookahead_gradient_fd(env, state, pi, gamma);
  const Composite c = evaluate_composite(env, state, pi, gamma);
  Vector provider_term(env.L);
  for (int l = 0; l < env.L; ++l) {
    const double drc = eval_deriv(env.lambda_bar_provider[l], c.current.e(l));
    double acc = 0.0;
    for (int k = 0; k < env.K; ++k) {
      const double df = eval_deriv(env.f[k][l], c.rc(l));
      acc += c.ru(k) * c.pbar(k, l) * df * (1.0 + gamma * (c.qbar(k, l) - c.avg(k)));
    }
    provider_term(l) = drc * acc;
  }
  Matrix g(env.K, env.L);
  for (int k = 0; k < env.K; ++k) {
    const double dru = eval_deriv(env.lambda_bar_viewer[k], c.current.s(k));
    for (int l = 0; l < env.L; ++l) {
      g(k, l) = dru * c.current.q(k, l) * c.avg(k) + provider_term(l) * state.viewer(k);
    }
  }
  return g;
}

Matrix lookahead_gradient(const EnvironmentSpec& env, const PopulationState& state,
                          const PolicyMatrix& pi, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  return lookahead_gradient_raw(env, state, pi.rows(), gamma);
}

namespace {

Matrix initial_logits(const EnvironmentSpec& env, const PopulationState& state) {
  const Matrix greedy = myopic_greedy(env, state).rows();
  const Matrix mixed =
      0.9 * greedy + Matrix::Constant(env.K, env.L, 0.1 / static_cast<double>(env.L));
  return mixed.array().log().matrix();
}

// d J / d theta_kj = pi_kj (G_kj - sum_l pi_kl G_kl).
Matrix logit_gradient(const Matrix& pi, const Matrix& G) {
  const Vector avg = pi.cwiseProduct(G).rowwise().sum();
  return pi.cwiseProduct(G.colwise() - avg);
}

}  // namespace

LookaheadResult optimize_lookahead_detailed(const EnvironmentSpec& env,
                                            const PopulationState& state,
                                            const LookaheadConfig& config) {
  validate(config);
  Matrix theta = initial_logits(env, state);
  Matrix pi = row_softmax(theta);

  LookaheadResult best;
  best.initial_objective = lookahead_objective_raw(env, state, pi, config.gamma);
  best.objective = best.initial_objective;
  best.policy = validate_policy(pi);
  if (!std::isfinite(best.objective)) {
    throw OptimizationError("non-finite look-ahead objective at initialization");
  }

  // Adam moments.
  Matrix m = Matrix::Zero(env.K, env.L);
  Matrix v = Matrix::Zero(env.K, env.L);
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;

  for (int it = 1; it <= config.iterations; ++it) {
    const Matrix G = lookahead_gradient_raw(env, state, pi, config.gamma);
    if (config.grad_check) {
      const Matrix fd =
          lookahead_gradient_fd(env, state, pi, config.gamma, config.grad_check->h);
      const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
      if ((G - fd).cwiseAbs().maxCoeff() > config.grad_check->tol * scale) {
        std::ostringstream os;
        os << "gradient check failed at iteration " << it;
        throw OptimizationError(os.str());
      }
    }
    const Matrix g = logit_gradient(pi, G);
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseAbs2();
    const double c1 = 1.0 - std::pow(kBeta1, it);
    const double c2 = 1.0 - std::pow(kBeta2, it);
    theta += config.learning_rate *
             ((m / c1).array() / ((v / c2).array().sqrt() + kEps)).matrix();
    pi = row_softmax(theta);
    const double value = lookahead_objective_raw(env, state, pi, config.gamma);
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os << "non-finite look-ahead objective at iteration " << it;
      throw OptimizationError(os.str());
    }
    if (value > best.objective) {
      best.objective = value;
      best.policy = validate_policy(pi);
      best.best_iteration = it;
    }
  }
  return best;
}

PolicyMatrix optimize_lookahead(const EnvironmentSpec& env, const PopulationState& state,
                                const LookaheadConfig& config) {
  return optimize_lookahead_detailed(env, state, config).policy;
}

PolicyMatrix interpolate(const PolicyMatrix& pi_lookahead, const PolicyMatrix& pi_myopic,
                         double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
  if (pi_lookahead.K() != pi_myopic.K() || pi_lookahead.L() != pi_myopic.L()) {
    throw DimensionError("interpolate: policy shapes differ");
  }
  if (beta == 0.0) return pi_myopic;
  if (beta == 1.0) return pi_lookahead;
  return validate_policy(beta * pi_lookahead.rows() + (1.0 - beta) * pi_myopic.rows(), false);
}

PolicyRule myopic_rule() {
  return [](const EnvironmentSpec& env, const PopulationState& s) { return myopic_greedy(env, s); };
}

PolicyRule lookahead_rule(double beta, LookaheadConfig config) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
  validate(config);
  return [beta, config](const EnvironmentSpec& env, const PopulationState& s) {
    const PolicyMatrix myopic = myopic_greedy(env, s);
    if (beta == 0.0) return myopic;
    return interpolate(optimize_lookahead(env, s, config), myopic, beta);
  };
}

}  // namespace twoside
