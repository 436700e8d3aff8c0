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

#include "twoside/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace twoside {

void validate(const InteractionLog& log) {
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    if (log.records[i].t != log.records[i - 1].t + 1) {
      throw ValidationError("interaction log records must be consecutive in t");
    }
  }
}

double recover_reference(double lambda_t, double lambda_t1, double eta) {
  if (!(eta > 0.0)) throw DomainError("reference population is undefined for eta = 0");
  return (lambda_t1 - lambda_t) / eta + lambda_t;
}

// ---------------------------------------------------------------------------
// Curve fitting in normalized coordinates z = (x - x_min) / x_range,
// w = (y - y_min) / y_range, model w = c3 + c0 (1 - exp(-c1 z)).

namespace {

struct Normalized {
  std::vector<double> z;
  std::vector<double> w;
};

struct Coeffs {
  double c0 = 0.0;
  double c1 = 0.0;
  double c3 = 0.0;
};

double sse(const Normalized& d, const Coeffs& c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.z.size(); ++i) {
    const double r = d.w[i] - (c.c3 + c.c0 * (1.0 - std::exp(-c.c1 * d.z[i])));
    acc += r * r;
  }
  return acc;
}

// Best c0 >= 0, c3 for a fixed rate c1 (linear least squares in two unknowns).
Coeffs linear_fit_for_rate(const Normalized& d, double c1) {
  const auto n = static_cast<double>(d.z.size());
  double su = 0, sw = 0, suu = 0, suw = 0;
  for (std::size_t i = 0; i < d.z.size(); ++i) {
    const double u = 1.0 - std::exp(-c1 * d.z[i]);
    su += u;
    sw += d.w[i];
    suu += u * u;
    suw += u * d.w[i];
  }
  Coeffs c;
  c.c1 = c1;
  const double det = n * suu - su * su;
  if (std::abs(det) > 1e-300) {
    c.c0 = std::max(0.0, (n * suw - su * sw) / det);
  }
  c.c3 = (sw - c.c0 * su) / n;
  return c;
}

// Projected Levenberg-Marquardt with Marquardt diagonal scaling.
Coeffs levenberg_marquardt(const Normalized& d, Coeffs c) {
  double mu = 1e-3;
  double current = sse(d, c);
  for (int iter = 0; iter < 500; ++iter) {
    Eigen::Matrix3d JtJ = Eigen::Matrix3d::Zero();
    Eigen::Vector3d Jtr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < d.z.size(); ++i) {
      const double E = std::exp(-c.c1 * d.z[i]);
      const Eigen::Vector3d row(1.0 - E, c.c0 * d.z[i] * E, 1.0);
      const double r = d.w[i] - (c.c3 + c.c0 * (1.0 - E));
      JtJ += row * row.transpose();
      Jtr += row * r;
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      Eigen::Matrix3d A = JtJ;
      for (int j = 0; j < 3; ++j) A(j, j) += mu * std::max(JtJ(j, j), 1e-12);
      const Eigen::Vector3d delta = A.ldlt().solve(Jtr);
      Coeffs trial{std::max(0.0, c.c0 + delta(0)), std::max(0.0, c.c1 + delta(1)),
                   c.c3 + delta(2)};
      const double value = sse(d, trial);
      if (std::isfinite(value) && value <= current) {
        const double gain = current - value;
        c = trial;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (gain <= 1e-15 * std::max(current, 1e-300) || value == 0.0) return c;
        current = value;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
  }
  return c;
}

}  // namespace

CurveFit fit_saturating_exp(const std::vector<std::pair<double, double>>& points,
                            const std::optional<SaturatingExp>& init) {
  if (points.size() < 4) {
    throw EstimationError("insufficient data: need at least 4 points to fit 4 parameters");
  }
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin, ymin = xmin, ymax = -xmin;
  std::set<double> distinct;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("non-finite fit data");
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
    distinct.insert(x);
  }
  if (distinct.size() < 2) throw EstimationError("degenerate design: all x values are identical");
  if (distinct.size() < 3) throw EstimationError("degenerate design: need 3 distinct x values");

  const double xr = xmax - xmin;
  const double yr = ymax - ymin;
  CurveFit out;
  if (yr == 0.0) {
    out.params = SaturatingExp{0.0, 1.0 / xr, xmin, ymin};
    out.rmse = 0.0;
    return out;
  }

  Normalized d;
  for (const auto& [x, y] : points) {
    d.z.push_back((x - xmin) / xr);
    d.w.push_back((y - ymin) / yr);
  }

  std::vector<double> rates = {0.05, 0.5, 2.0, 8.0};
  {
    // Log-linearization against an asymptote slightly above the data.
    double sz = 0, sl = 0, szz = 0, szl = 0;
    const auto n = static_cast<double>(d.z.size());
    for (std::size_t i = 0; i < d.z.size(); ++i) {
      const double lg = std::log(1.05 - d.w[i]);
      sz += d.z[i];
      sl += lg;
      szz += d.z[i] * d.z[i];
      szl += d.z[i] * lg;
    }
    const double det = n * szz - sz * sz;
    const double slope = det > 0.0 ? (n * szl - sz * sl) / det : -1.0;
    rates.insert(rates.begin(), std::clamp(-slope, 1e-3, 50.0));
  }

  std::vector<Coeffs> starts;
  for (double r : rates) starts.push_back(linear_fit_for_rate(d, r));
  if (init && init->a0 >= 0.0 && init->a1 >= 0.0) {
    // Re-express the initial guess with a2 pinned at xmin.
    const double shift = std::exp(-init->a1 * (xmin - init->a2));
    const double A0 = init->a0 * shift;
    const double A3 = init->a3 + init->a0 * (1.0 - shift);
    if (std::isfinite(A0) && std::isfinite(A3)) {
      starts.push_back(Coeffs{A0 / yr, init->a1 * xr, (A3 - ymin) / yr});
    }
  }

  Coeffs best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (const Coeffs& s : starts) {
    const Coeffs c = levenberg_marquardt(d, s);
    const double value = sse(d, c);
    if (value < best_sse) {
      best_sse = value;
      best = c;
    }
  }
  out.params = SaturatingExp{best.c0 * yr, best.c1 / xr, xmin, best.c3 * yr + ymin};
  double acc = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - eval(out.params, x);
    acc += r * r;
  }
  out.rmse = std::sqrt(acc / static_cast<double>(points.size()));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

CurveFit fit_or_keep(const std::vector<std::pair<double, double>>& pts, const CurveFit* previous,
                     const std::string& label, std::vector<std::string>* warnings) {
  try {
    return fit_saturating_exp(pts, previous ? std::optional(previous->params) : std::nullopt);
  } catch (const Error& err) {
    if (!previous) throw EstimationError("fit of " + label + " failed: " + err.what());
    if (warnings) warnings->push_back("fit of " + label + " failed, keeping previous: " + err.what());
    return *previous;
  }
}

FittedDynamics fit_dynamics_impl(const InteractionLog& log, const Matrix& B,
                                 const FittedDynamics* previous,
                                 std::vector<std::string>* warnings) {
  validate(log);
  if (log.records.empty()) throw EstimationError("empty interaction log");
  const auto K = static_cast<int>(log.records.front().s.size());
  const auto L = static_cast<int>(log.records.front().e.size());
  const bool known_b = B.size() > 0;
  const std::size_t n = log.records.size();

  FittedDynamics out;
  for (int k = 0; k < K; ++k) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto& a = log.records[i];
      const auto& b = log.records[i + 1];
      pts.emplace_back(a.s(k),
                       recover_reference(a.lambda_viewer(k), b.lambda_viewer(k), log.eta_viewer(k)));
    }
    out.lambda_bar_viewer_hat.push_back(
        fit_or_keep(pts, previous ? &previous->lambda_bar_viewer_hat[k] : nullptr,
                    "viewer reference " + std::to_string(k), warnings));
  }
  for (int l = 0; l < L; ++l) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto& a = log.records[i];
      const auto& b = log.records[i + 1];
      pts.emplace_back(a.e(l), recover_reference(a.lambda_provider(l), b.lambda_provider(l),
                                                 log.eta_provider(l)));
    }
    out.lambda_bar_provider_hat.push_back(
        fit_or_keep(pts, previous ? &previous->lambda_bar_provider_hat[l] : nullptr,
                    "provider reference " + std::to_string(l), warnings));
  }
  out.f_hat.resize(K);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& r : log.records) {
        pts.emplace_back(r.lambda_provider(l), r.q(k, l) - (known_b ? B(k, l) : 0.0));
      }
      out.f_hat[k].push_back(
          fit_or_keep(pts, previous ? &previous->f_hat[k][l] : nullptr,
                      "population effect " + std::to_string(k) + "," + std::to_string(l),
                      warnings));
    }
  }
  return out;
}

}  // namespace

FittedDynamics fit_dynamics(const InteractionLog& log, const Matrix& B,
                            const FittedDynamics* previous) {
  return fit_dynamics_impl(log, B, previous, nullptr);
}

EnvironmentSpec surrogate_environment(const FittedDynamics& fit, const Matrix& B,
                                      const Vector& eta_viewer, const Vector& eta_provider) {
  EnvironmentSpec env;
  env.K = static_cast<int>(fit.lambda_bar_viewer_hat.size());
  env.L = static_cast<int>(fit.lambda_bar_provider_hat.size());
  env.B = B.size() > 0 ? B : Matrix::Zero(env.K, env.L);
  for (const auto& c : fit.lambda_bar_viewer_hat) env.lambda_bar_viewer.emplace_back(c.params);
  for (const auto& c : fit.lambda_bar_provider_hat) env.lambda_bar_provider.emplace_back(c.params);
  env.f.resize(env.K);
  for (int k = 0; k < env.K; ++k) {
    for (const auto& c : fit.f_hat[k]) env.f[k].emplace_back(c.params);
  }
  env.eta_viewer = eta_viewer;
  env.eta_provider = eta_provider;
  validate(env);
  return env;
}

// ---------------------------------------------------------------------------

SimulatorBlackbox::SimulatorBlackbox(EnvironmentSpec env, PopulationState init,
                                     std::uint64_t seed)
    : env_(std::move(env)), state_(std::move(init)), rng_(seed) {
  validate(env_);
  validate(env_, state_);
}

InteractionRecord SimulatorBlackbox::deploy(const PolicyMatrix& pi) {
  const Payoffs p = payoffs(env_, state_, pi);
  InteractionRecord rec{state_.t, p.s, p.e, p.q, state_.viewer, state_.provider};
  state_ = step(env_, state_, pi, rng_);
  return rec;
}

ExploreThenCommitResult explore_then_commit(Blackbox& box, const ExploreThenCommitConfig& cfg) {
  if (cfg.burn_in < 1) throw ConfigError("burn-in must be >= 1");
  if (cfg.horizon <= cfg.burn_in) throw ConfigError("horizon must exceed the burn-in");
  if (cfg.refit_every < 1) throw ConfigError("refit_every must be >= 1");
  if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
  validate(cfg.lookahead);

  ExploreThenCommitResult res;
  res.log.eta_viewer = box.eta_viewer();
  res.log.eta_provider = box.eta_provider();
  const Matrix& B = box.base_utility();
  const PolicyMatrix explore = epsilon_greedy(B, cfg.beta);
  bool have_fit = false;
  std::optional<EnvironmentSpec> surrogate;

  for (int i = 0; i < cfg.horizon; ++i) {
    const PopulationState state = box.state();
    PolicyMatrix pi = explore;
    if (i >= cfg.burn_in) {
      if (!have_fit || (i - cfg.burn_in) % cfg.refit_every == 0) {
        std::vector<std::string> notes;
        try {
          res.fit = fit_dynamics_impl(res.log, B, have_fit ? &res.fit : nullptr, &notes);
          surrogate = surrogate_environment(res.fit, B, box.eta_viewer(), box.eta_provider());
          have_fit = true;
        } catch (const Error& err) {
          if (!have_fit) throw EstimationError(std::string("no usable fit: ") + err.what());
          notes.push_back(std::string("refit failed, keeping previous fit: ") + err.what());
        }
        for (auto& n : notes) res.warnings.push_back({state.t, std::move(n)});
      }
      const PolicyMatrix myopic = myopic_greedy(*surrogate, state);
      if (cfg.beta == 0.0) {
        pi = myopic;
      } else {
        try {
          pi = interpolate(optimize_lookahead(*surrogate, state, cfg.lookahead), myopic, cfg.beta);
        } catch (const OptimizationError& err) {
          res.warnings.push_back(
              {state.t, std::string("look-ahead failed on surrogate, deploying myopic: ") +
                            err.what()});
          pi = myopic;
        }
      }
    }
    InteractionRecord rec = box.deploy(pi);
    TrajectoryStep st;
    st.state = state;
    st.payoffs = Payoffs{rec.s, rec.e, rec.q};
    st.welfare = state.viewer.dot(rec.s);
    st.policy = pi;
    res.trajectory.steps.push_back(std::move(st));
    res.log.records.push_back(std::move(rec));
  }
  return res;
}

}  // namespace twoside
