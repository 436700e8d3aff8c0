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

// JSON and CSV forms of the model types. CSV is ',' separated with LF line
// endings and %.17g floats, so every double survives a round trip.

#ifndef TWOSIDE_IO_HPP_
#define TWOSIDE_IO_HPP_

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "twoside/analytics.hpp"
#include "twoside/dynamics.hpp"
#include "twoside/estimation.hpp"
#include "twoside/model.hpp"

namespace twoside {

using Json = nlohmann::json;

// {"kind": <variant name>, "params": {...}}
Json to_json(const ScalarFn& fn);
ScalarFn scalar_fn_from_json(const Json& j);

Json to_json(const EnvironmentSpec& env);
// Throws ConfigError on missing or mistyped fields, then validates.
EnvironmentSpec environment_from_json(const Json& j);

Json to_json(const PopulationState& state);
PopulationState population_from_json(const Json& j);

Json to_json(const PolicyMatrix& pi);
PolicyMatrix policy_from_json(const Json& j);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

std::string format_double(double x);

// Columns t, lambda_u_1..K, lambda_c_1..L, s_1..K, e_1..L, welfare.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
// Only the CSV fields are restored; policy and q are left empty.
Trajectory read_trajectory_csv(std::istream& in);

// Trajectory columns followed by q_k_l in row-major order.
void write_interaction_log_csv(const InteractionLog& log, std::ostream& out);
InteractionLog read_interaction_log_csv(std::istream& in, const Vector& eta_viewer,
                                        const Vector& eta_provider);

Json to_json(const CurveFit& fit);
Json to_json(const FittedDynamics& fit);
FittedDynamics fitted_dynamics_from_json(const Json& j);

// Columns t, total, population, policy, const, cumulative.
void write_regret_csv(const RegretReport& r, std::ostream& out);
Json regret_summary(const RegretSuite& suite);

// File helpers; failures raise IoError.
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace twoside

#endif  // TWOSIDE_IO_HPP_
