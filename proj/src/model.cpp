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

#include "twoside/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twoside {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string("non-finite parameter: ") + what);
  }
}

double sigmoid_half(const SigmoidHalf& p, double x) {
  return p.max * (sigmoid(x / p.tau) - 0.5);
}

double sigmoid_half_deriv(const SigmoidHalf& p, double x) {
  const double s = sigmoid(x / p.tau);
  return p.max * s * (1.0 - s) / p.tau;
}

// Index i of the segment [x_i, x_{i+1}) holding x, or -1 / n-1 outside.
std::ptrdiff_t table_segment(const Table& t, double x) {
  const auto& k = t.knots;
  auto it = std::upper_bound(
      k.begin(), k.end(), x,
      [](double v, const std::pair<double, double>& p) { return v < p.first; });
  return static_cast<std::ptrdiff_t>(it - k.begin()) - 1;
}

void validate_table(const Table& t) {
  if (t.knots.size() < 2) {
    throw ConfigError("Table requires at least 2 knots");
  }
  for (std::size_t i = 0; i < t.knots.size(); ++i) {
    require_finite(t.knots[i].first, "Table.x");
    require_finite(t.knots[i].second, "Table.y");
    if (i > 0) {
      if (!(t.knots[i].first > t.knots[i - 1].first)) {
        throw ConfigError("Table knots must have strictly increasing x");
      }
      if (t.knots[i].second < t.knots[i - 1].second) {
        throw ConfigError("Table knots must have non-decreasing y");
      }
    }
  }
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

double eval(const ScalarFn& fn, double x) {
  if (!std::isfinite(x)) throw DomainError("eval: non-finite argument");
  return std::visit(
      Overloaded{
          [x](const Linear& p) { return p.slope * x + p.intercept; },
          [x](const SigmoidHalf& p) { return sigmoid_half(p, x); },
          [x](const SaturatingExp& p) {
            return p.a0 * (1.0 - std::exp(-p.a1 * (x - p.a2))) + p.a3;
          },
          [x](const ScaledLogistic& p) {
            return p.gain * sigmoid(p.scale * (x - p.shift));
          },
          [x](const Table& p) {
            if (p.knots.size() < 2) throw ConfigError("Table requires at least 2 knots");
            const auto i = table_segment(p, x);
            const auto n = static_cast<std::ptrdiff_t>(p.knots.size());
            if (i < 0) return p.knots.front().second;
            if (i >= n - 1) return p.knots.back().second;
            const auto& [x0, y0] = p.knots[i];
            const auto& [x1, y1] = p.knots[i + 1];
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
          },
          [x](const WeightedSigmoidSum& p) {
            double acc = 0.0;
            for (std::size_t i = 0; i < p.weights.size(); ++i) {
              if (p.weights[i] != 0.0) acc += p.weights[i] * sigmoid_half(p.components[i], x);
            }
            return acc;
          },
      },
      fn);
}

double eval_deriv(const ScalarFn& fn, double x) {
  if (!std::isfinite(x)) throw DomainError("eval_deriv: non-finite argument");
  return std::visit(
      Overloaded{
          [](const Linear& p) { return p.slope; },
          [x](const SigmoidHalf& p) { return sigmoid_half_deriv(p, x); },
          [x](const SaturatingExp& p) {
            return p.a0 * p.a1 * std::exp(-p.a1 * (x - p.a2));
          },
          [x](const ScaledLogistic& p) {
            const double s = sigmoid(p.scale * (x - p.shift));
            return p.gain * p.scale * s * (1.0 - s);
          },
          [x](const Table& p) {
            if (p.knots.size() < 2) throw ConfigError("Table requires at least 2 knots");
            const auto i = table_segment(p, x);
            const auto n = static_cast<std::ptrdiff_t>(p.knots.size());
            if (i < 0 || i >= n - 1) return 0.0;
            const auto& [x0, y0] = p.knots[i];
            const auto& [x1, y1] = p.knots[i + 1];
            return (y1 - y0) / (x1 - x0);
          },
          [x](const WeightedSigmoidSum& p) {
            double acc = 0.0;
            for (std::size_t i = 0; i < p.weights.size(); ++i) {
              if (p.weights[i] != 0.0) acc += p.weights[i] * sigmoid_half_deriv(p.components[i], x);
            }
            return acc;
          },
      },
      fn);
}

bool is_smooth(const ScalarFn& fn) { return !std::holds_alternative<Table>(fn); }

std::string kind_name(const ScalarFn& fn) {
  return std::visit(Overloaded{
                        [](const Linear&) { return std::string("Linear"); },
                        [](const SigmoidHalf&) { return std::string("SigmoidHalf"); },
                        [](const SaturatingExp&) { return std::string("SaturatingExp"); },
                        [](const ScaledLogistic&) { return std::string("ScaledLogistic"); },
                        [](const Table&) { return std::string("Table"); },
                        [](const WeightedSigmoidSum&) { return std::string("WeightedSigmoidSum"); },
                    },
                    fn);
}

void validate(const ScalarFn& fn) {
  std::visit(
      Overloaded{
          [](const Linear& p) {
            require_finite(p.slope, "Linear.slope");
            require_finite(p.intercept, "Linear.intercept");
            if (p.slope < 0.0) throw ConfigError("Linear.slope must be >= 0");
          },
          [](const SigmoidHalf& p) {
            require_finite(p.max, "SigmoidHalf.max");
            require_finite(p.tau, "SigmoidHalf.tau");
            if (!(p.max > 0.0) || !(p.tau > 0.0)) {
              throw ConfigError("SigmoidHalf requires max > 0 and tau > 0");
            }
          },
          [](const SaturatingExp& p) {
            require_finite(p.a0, "SaturatingExp.a0");
            require_finite(p.a1, "SaturatingExp.a1");
            require_finite(p.a2, "SaturatingExp.a2");
            require_finite(p.a3, "SaturatingExp.a3");
            if (p.a0 * p.a1 < 0.0) throw ConfigError("SaturatingExp requires a0 * a1 >= 0");
          },
          [](const ScaledLogistic& p) {
            require_finite(p.gain, "ScaledLogistic.gain");
            require_finite(p.scale, "ScaledLogistic.scale");
            require_finite(p.shift, "ScaledLogistic.shift");
            if (p.gain * p.scale < 0.0) {
              throw ConfigError("ScaledLogistic requires gain * scale >= 0");
            }
          },
          [](const Table& p) { validate_table(p); },
          [](const WeightedSigmoidSum& p) {
            if (p.weights.size() != p.components.size()) {
              throw ConfigError("WeightedSigmoidSum: weights and components differ in length");
            }
            for (std::size_t i = 0; i < p.weights.size(); ++i) {
              require_finite(p.weights[i], "WeightedSigmoidSum.weight");
              if (p.weights[i] < 0.0) throw ConfigError("WeightedSigmoidSum weights must be >= 0");
              validate(ScalarFn{p.components[i]});
            }
          },
      },
      fn);
}

ScalarFn constant_fn(double value) { return Linear{0.0, value}; }
ScalarFn identity_fn() { return Linear{1.0, 0.0}; }

bool EnvironmentSpec::all_smooth() const {
  auto smooth = [](const ScalarFn& g) { return is_smooth(g); };
  for (const auto& row : f) {
    if (!std::all_of(row.begin(), row.end(), smooth)) return false;
  }
  return std::all_of(lambda_bar_viewer.begin(), lambda_bar_viewer.end(), smooth) &&
         std::all_of(lambda_bar_provider.begin(), lambda_bar_provider.end(), smooth);
}

void validate(const EnvironmentSpec& env) {
  if (env.K < 1 || env.L < 1) throw ConfigError("K and L must be >= 1");
  if (env.B.rows() != env.K || env.B.cols() != env.L) {
    throw DimensionError("B must be K x L");
  }
  if (!env.B.allFinite()) throw DomainError("B has non-finite entries");
  if (static_cast<int>(env.f.size()) != env.K) throw DimensionError("f must have K rows");
  for (const auto& row : env.f) {
    if (static_cast<int>(row.size()) != env.L) throw DimensionError("f rows must have L entries");
    for (const auto& g : row) validate(g);
  }
  if (static_cast<int>(env.lambda_bar_viewer.size()) != env.K) {
    throw DimensionError("lambda_bar_viewer must have K entries");
  }
  if (static_cast<int>(env.lambda_bar_provider.size()) != env.L) {
    throw DimensionError("lambda_bar_provider must have L entries");
  }
  for (const auto& g : env.lambda_bar_viewer) validate(g);
  for (const auto& g : env.lambda_bar_provider) validate(g);
  if (env.eta_viewer.size() != env.K || env.eta_provider.size() != env.L) {
    throw DimensionError("eta vectors must have K and L entries");
  }
  auto in_unit = [](const Vector& v) {
    return (v.array() >= 0.0).all() && (v.array() <= 1.0).all();
  };
  if (!in_unit(env.eta_viewer) || !in_unit(env.eta_provider)) {
    throw ConfigError("eta entries must lie in [0, 1]");
  }
  if (env.noise && !(env.noise->relative_std >= 0.0 && std::isfinite(env.noise->relative_std))) {
    throw ConfigError("noise.relative_std must be finite and >= 0");
  }
}

void validate(const EnvironmentSpec& env, const PopulationState& state) {
  if (state.viewer.size() != env.K || state.provider.size() != env.L) {
    throw DimensionError("population sizes do not match K and L");
  }
  if (state.t < 0) throw ValidationError("timestep must be >= 0");
  if (!state.viewer.allFinite() || !state.provider.allFinite()) {
    throw DomainError("populations must be finite");
  }
  if ((state.viewer.array() < 0.0).any() || (state.provider.array() < 0.0).any()) {
    throw ValidationError("populations must be >= 0");
  }
}

PolicyMatrix validate_policy(const Matrix& m, bool renormalize) {
  if (m.rows() < 1 || m.cols() < 1) throw DimensionError("policy must be at least 1 x 1");
  Matrix out = m;
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    for (Eigen::Index l = 0; l < m.cols(); ++l) {
      const double v = m(k, l);
      if (!std::isfinite(v)) throw ValidationError("policy has a non-finite entry");
      if (v < 0.0) {
        std::ostringstream os;
        os << "policy entry (" << k << "," << l << ") is negative: " << v;
        throw ValidationError(os.str());
      }
      if (v > 1.0 + kRowSumTolerance) {
        std::ostringstream os;
        os << "policy entry (" << k << "," << l << ") exceeds 1: " << v;
        throw ValidationError(os.str());
      }
    }
    const double sum = m.row(k).sum();
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "policy row " << k << " sums to " << sum;
      throw ValidationError(os.str());
    }
    if (renormalize && sum != 1.0) out.row(k) /= sum;
  }
  return PolicyMatrix(std::move(out));
}

int argmax_lowest(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  int best = 0;
  for (Eigen::Index l = 1; l < row.size(); ++l) {
    if (row(l) > row(best)) best = static_cast<int>(l);
  }
  return best;
}

PolicyMatrix epsilon_greedy(const Matrix& B, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in [0, 1]");
  }
  const Eigen::Index L = B.cols();
  const double uniform = 1.0 / static_cast<double>(L);
  Matrix m(B.rows(), L);
  for (Eigen::Index k = 0; k < B.rows(); ++k) {
    const int best = argmax_lowest(B.row(k));
    for (Eigen::Index l = 0; l < L; ++l) {
      const double indicator = (l == best) ? 1.0 : 0.0;
      m(k, l) = (1.0 - epsilon) * indicator + epsilon * uniform;
    }
  }
  return validate_policy(m, /*renormalize=*/false);
}

}  // namespace twoside
