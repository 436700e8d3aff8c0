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

// Core value types of the two-sided platform model: monotone scalar
// function families, the environment description, populations, policies
// and payoffs.

#ifndef TWOSIDE_MODEL_HPP_
#define TWOSIDE_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "twoside/errors.hpp"

namespace twoside {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Scalar function families. All are non-decreasing on [0, inf).

// slope * x + intercept
struct Linear {
  double slope = 0.0;
  double intercept = 0.0;
};

// max * (sigmoid(x / tau) - 0.5)
struct SigmoidHalf {
  double max = 1.0;
  double tau = 1.0;
};

// a0 * (1 - exp(-a1 * (x - a2))) + a3
struct SaturatingExp {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
};

// gain * sigmoid(scale * (x - shift))
struct ScaledLogistic {
  double gain = 1.0;
  double scale = 1.0;
  double shift = 0.0;
};

// Piecewise-linear interpolation through sorted knots, flat outside.
struct Table {
  std::vector<std::pair<double, double>> knots;
};

// sum_i weights[i] * components[i](x); used for feature-weighted quality
// curves where each component is a SigmoidHalf.
struct WeightedSigmoidSum {
  std::vector<double> weights;
  std::vector<SigmoidHalf> components;
};

using ScalarFn = std::variant<Linear, SigmoidHalf, SaturatingExp,
                              ScaledLogistic, Table, WeightedSigmoidSum>;

double sigmoid(double x);

double eval(const ScalarFn& fn, double x);
// Table: the slope of the segment to the right of x (right-hand derivative
// at a knot, zero outside the knot range).
double eval_deriv(const ScalarFn& fn, double x);

// False only for the Table variant, whose derivative is discontinuous.
bool is_smooth(const ScalarFn& fn);

// Throws ConfigError / DomainError when parameters are non-finite or break
// monotonicity.
void validate(const ScalarFn& fn);

std::string kind_name(const ScalarFn& fn);

ScalarFn constant_fn(double value);
ScalarFn identity_fn();

// ---------------------------------------------------------------------------

struct NoiseSpec {
  double relative_std = 0.0;
};

struct EnvironmentSpec {
  int K = 0;
  int L = 0;
  Matrix B;                                  // K x L base utilities
  std::vector<std::vector<ScalarFn>> f;      // K x L population effects
  std::vector<ScalarFn> lambda_bar_viewer;   // K reference functions of s_k
  std::vector<ScalarFn> lambda_bar_provider; // L reference functions of e_l
  Vector eta_viewer;                         // K
  Vector eta_provider;                       // L
  std::optional<NoiseSpec> noise;
  std::uint64_t seed = 0;

  const ScalarFn& effect(int k, int l) const { return f[k][l]; }
  bool all_smooth() const;
};

// Checks dimensions, eta ranges, and every contained function.
void validate(const EnvironmentSpec& env);

struct PopulationState {
  int t = 0;
  Vector viewer;    // lambda_k, length K
  Vector provider;  // lambda_l, length L
};

// Throws when sizes disagree with env or an entry is negative / non-finite.
void validate(const EnvironmentSpec& env, const PopulationState& state);

// A K x L row-stochastic allocation. Only constructible through
// validate_policy, so every instance satisfies the simplex invariant.
class PolicyMatrix {
 public:
  PolicyMatrix() = default;

  const Matrix& rows() const { return m_; }
  double operator()(int k, int l) const { return m_(k, l); }
  int K() const { return static_cast<int>(m_.rows()); }
  int L() const { return static_cast<int>(m_.cols()); }

 private:
  explicit PolicyMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;

  friend PolicyMatrix validate_policy(const Matrix& m, bool renormalize);
};

inline constexpr double kRowSumTolerance = 1e-9;

// Rejects negative entries, entries above one, and rows whose sum deviates
// from one by more than kRowSumTolerance. Rows inside the tolerance are
// divided by their sum when renormalize is set.
PolicyMatrix validate_policy(const Matrix& m, bool renormalize = true);

// Indicator of argmax_l B(k, l) mixed with the uniform row. Ties go to the
// lowest provider index.
PolicyMatrix epsilon_greedy(const Matrix& B, double epsilon);

// First index of the maximum entry.
int argmax_lowest(const Eigen::Ref<const Eigen::RowVectorXd>& row);

struct Payoffs {
  Vector s;  // satisfaction, length K
  Vector e;  // exposure, length L
  Matrix q;  // utilities, K x L
};

}  // namespace twoside

#endif  // TWOSIDE_MODEL_HPP_
