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

#include "twoside/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace twoside {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double num(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing field '") + key + "'");
  }
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

Json sigmoid_half_json(const SigmoidHalf& s) { return Json{{"max", s.max}, {"tau", s.tau}}; }

SigmoidHalf sigmoid_half_from(const Json& p) { return SigmoidHalf{num(p, "max"), num(p, "tau")}; }

}  // namespace

Json to_json(const ScalarFn& fn) {
  Json params = std::visit(
      Overloaded{
          [](const Linear& f) { return Json{{"slope", f.slope}, {"intercept", f.intercept}}; },
          [](const SigmoidHalf& f) { return sigmoid_half_json(f); },
          [](const SaturatingExp& f) {
            return Json{{"a0", f.a0}, {"a1", f.a1}, {"a2", f.a2}, {"a3", f.a3}};
          },
          [](const ScaledLogistic& f) {
            return Json{{"gain", f.gain}, {"scale", f.scale}, {"shift", f.shift}};
          },
          [](const Table& f) {
            Json knots = Json::array();
            for (const auto& [x, y] : f.knots) knots.push_back(Json::array({x, y}));
            return Json{{"knots", knots}};
          },
          [](const WeightedSigmoidSum& f) {
            Json comps = Json::array();
            for (const auto& c : f.components) comps.push_back(sigmoid_half_json(c));
            return Json{{"weights", f.weights}, {"components", comps}};
          },
      },
      fn);
  return Json{{"kind", kind_name(fn)}, {"params", params}};
}

ScalarFn scalar_fn_from_json(const Json& j) {
  const Json& kj = field(j, "kind");
  if (!kj.is_string()) throw ConfigError("function 'kind' must be a string");
  const std::string kind = kj.get<std::string>();
  const Json& p = field(j, "params");
  ScalarFn fn;
  if (kind == "Linear") {
    fn = Linear{num(p, "slope"), num(p, "intercept")};
  } else if (kind == "SigmoidHalf") {
    fn = sigmoid_half_from(p);
  } else if (kind == "SaturatingExp") {
    fn = SaturatingExp{num(p, "a0"), num(p, "a1"), num(p, "a2"), num(p, "a3")};
  } else if (kind == "ScaledLogistic") {
    fn = ScaledLogistic{num(p, "gain"), num(p, "scale"), num(p, "shift")};
  } else if (kind == "Table") {
    Table t;
    const Json& knots = field(p, "knots");
    if (!knots.is_array()) throw ConfigError("table knots must be an array");
    for (const auto& k : knots) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
        throw ConfigError("table knots must be [x, y] pairs");
      }
      t.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    }
    fn = std::move(t);
  } else if (kind == "WeightedSigmoidSum") {
    WeightedSigmoidSum w;
    const Json& weights = field(p, "weights");
    const Json& comps = field(p, "components");
    if (!weights.is_array() || !comps.is_array()) {
      throw ConfigError("WeightedSigmoidSum needs weight and component arrays");
    }
    for (const auto& x : weights) {
      if (!x.is_number()) throw ConfigError("weights must be numbers");
      w.weights.push_back(x.get<double>());
    }
    for (const auto& c : comps) w.components.push_back(sigmoid_half_from(c));
    fn = std::move(w);
  } else {
    throw ConfigError("unknown function kind '" + kind + "'");
  }
  validate(fn);
  return fn;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vector_from_json(j[r]);
    if (static_cast<std::size_t>(row.size()) != cols) throw DimensionError("ragged matrix rows");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Json to_json(const EnvironmentSpec& env) {
  Json j;
  j["K"] = env.K;
  j["L"] = env.L;
  j["B"] = to_json(env.B);
  Json f = Json::array();
  for (const auto& row : env.f) {
    Json r = Json::array();
    for (const auto& fn : row) r.push_back(to_json(fn));
    f.push_back(r);
  }
  j["f"] = f;
  Json lv = Json::array();
  for (const auto& fn : env.lambda_bar_viewer) lv.push_back(to_json(fn));
  Json lp = Json::array();
  for (const auto& fn : env.lambda_bar_provider) lp.push_back(to_json(fn));
  j["lambda_bar_viewer"] = lv;
  j["lambda_bar_provider"] = lp;
  j["eta_viewer"] = to_json(env.eta_viewer);
  j["eta_provider"] = to_json(env.eta_provider);
  j["noise"] = env.noise ? Json{{"relative_std", env.noise->relative_std}} : Json(nullptr);
  j["seed"] = env.seed;
  return j;
}

EnvironmentSpec environment_from_json(const Json& j) {
  try {
    EnvironmentSpec env;
    env.K = field(j, "K").get<int>();
    env.L = field(j, "L").get<int>();
    env.B = matrix_from_json(field(j, "B"));
    for (const auto& row : field(j, "f")) {
      std::vector<ScalarFn> r;
      for (const auto& fn : row) r.push_back(scalar_fn_from_json(fn));
      env.f.push_back(std::move(r));
    }
    for (const auto& fn : field(j, "lambda_bar_viewer")) {
      env.lambda_bar_viewer.push_back(scalar_fn_from_json(fn));
    }
    for (const auto& fn : field(j, "lambda_bar_provider")) {
      env.lambda_bar_provider.push_back(scalar_fn_from_json(fn));
    }
    // A scalar eta is shared by every group on that side.
    const auto etas = [&](const char* key, int n) {
      const Json& e = field(j, key);
      return e.is_number() ? Vector(Vector::Constant(n, e.get<double>())) : vector_from_json(e);
    };
    env.eta_viewer = etas("eta_viewer", env.K);
    env.eta_provider = etas("eta_provider", env.L);
    if (j.contains("noise") && !j.at("noise").is_null()) {
      env.noise = NoiseSpec{num(j.at("noise"), "relative_std")};
    }
    if (j.contains("seed")) env.seed = j.at("seed").get<std::uint64_t>();
    validate(env);
    return env;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed environment: ") + e.what());
  }
}

Json to_json(const PopulationState& state) {
  return Json{{"t", state.t},
              {"lambda_viewer", to_json(state.viewer)},
              {"lambda_provider", to_json(state.provider)}};
}

PopulationState population_from_json(const Json& j) {
  PopulationState s;
  if (j.contains("t")) s.t = j.at("t").get<int>();
  s.viewer = vector_from_json(field(j, "lambda_viewer"));
  s.provider = vector_from_json(field(j, "lambda_provider"));
  return s;
}

Json to_json(const PolicyMatrix& pi) { return to_json(pi.rows()); }

PolicyMatrix policy_from_json(const Json& j) { return validate_policy(matrix_from_json(j)); }

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError("bad CSV number '" + s + "'");
  return v;
}

int count_prefix(const std::vector<std::string>& header, const std::string& prefix) {
  int n = 0;
  for (const auto& h : header) {
    if (h.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

void write_header(std::ostream& out, int K, int L) {
  out << "t";
  for (int k = 1; k <= K; ++k) out << ",lambda_u_" << k;
  for (int l = 1; l <= L; ++l) out << ",lambda_c_" << l;
  for (int k = 1; k <= K; ++k) out << ",s_" << k;
  for (int l = 1; l <= L; ++l) out << ",e_" << l;
  out << ",welfare";
}

void write_row(std::ostream& out, int t, const Vector& lu, const Vector& lc, const Vector& s,
               const Vector& e, double w) {
  out << t;
  for (Eigen::Index i = 0; i < lu.size(); ++i) out << ',' << format_double(lu(i));
  for (Eigen::Index i = 0; i < lc.size(); ++i) out << ',' << format_double(lc(i));
  for (Eigen::Index i = 0; i < s.size(); ++i) out << ',' << format_double(s(i));
  for (Eigen::Index i = 0; i < e.size(); ++i) out << ',' << format_double(e(i));
  out << ',' << format_double(w);
}

struct ParsedRow {
  int t = 0;
  Vector lu, lc, s, e;
  double welfare = 0.0;
  std::vector<double> rest;
};

struct ParsedCsv {
  int K = 0;
  int L = 0;
  std::vector<ParsedRow> rows;
};

ParsedCsv parse_csv(std::istream& in, int extra_columns_per_kl) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  const auto header = split(line);
  ParsedCsv p;
  p.K = count_prefix(header, "lambda_u_");
  p.L = count_prefix(header, "lambda_c_");
  const std::size_t width =
      static_cast<std::size_t>(2 + 2 * p.K + 2 * p.L + extra_columns_per_kl * p.K * p.L);
  if (header.size() != width || header.front() != "t") throw IoError("unexpected CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != width) throw IoError("CSV row has the wrong number of columns");
    ParsedRow r;
    std::size_t c = 0;
    r.t = static_cast<int>(parse_double(cells[c++]));
    const auto take = [&](int n) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v(i) = parse_double(cells[c++]);
      return v;
    };
    r.lu = take(p.K);
    r.lc = take(p.L);
    r.s = take(p.K);
    r.e = take(p.L);
    r.welfare = parse_double(cells[c++]);
    while (c < cells.size()) r.rest.push_back(parse_double(cells[c++]));
    p.rows.push_back(std::move(r));
  }
  return p;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.steps.empty()) throw IoError("cannot write an empty trajectory");
  const auto K = static_cast<int>(traj.steps.front().state.viewer.size());
  const auto L = static_cast<int>(traj.steps.front().state.provider.size());
  write_header(out, K, L);
  out << '\n';
  for (const auto& st : traj.steps) {
    write_row(out, st.state.t, st.state.viewer, st.state.provider, st.payoffs.s, st.payoffs.e,
              st.welfare);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  const ParsedCsv p = parse_csv(in, 0);
  Trajectory traj;
  for (const auto& r : p.rows) {
    TrajectoryStep st;
    st.state.t = r.t;
    st.state.viewer = r.lu;
    st.state.provider = r.lc;
    st.payoffs.s = r.s;
    st.payoffs.e = r.e;
    st.welfare = r.welfare;
    traj.steps.push_back(std::move(st));
  }
  return traj;
}

void write_interaction_log_csv(const InteractionLog& log, std::ostream& out) {
  if (log.records.empty()) throw IoError("cannot write an empty interaction log");
  const auto K = static_cast<int>(log.records.front().s.size());
  const auto L = static_cast<int>(log.records.front().e.size());
  write_header(out, K, L);
  for (int k = 1; k <= K; ++k) {
    for (int l = 1; l <= L; ++l) out << ",q_" << k << '_' << l;
  }
  out << '\n';
  for (const auto& r : log.records) {
    write_row(out, r.t, r.lambda_viewer, r.lambda_provider, r.s, r.e, r.lambda_viewer.dot(r.s));
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < L; ++l) out << ',' << format_double(r.q(k, l));
    }
    out << '\n';
  }
}

InteractionLog read_interaction_log_csv(std::istream& in, const Vector& eta_viewer,
                                        const Vector& eta_provider) {
  const ParsedCsv p = parse_csv(in, 1);
  InteractionLog log;
  log.eta_viewer = eta_viewer;
  log.eta_provider = eta_provider;
  for (const auto& r : p.rows) {
    InteractionRecord rec;
    rec.t = r.t;
    rec.lambda_viewer = r.lu;
    rec.lambda_provider = r.lc;
    rec.s = r.s;
    rec.e = r.e;
    rec.q.resize(p.K, p.L);
    for (int k = 0; k < p.K; ++k) {
      for (int l = 0; l < p.L; ++l) rec.q(k, l) = r.rest[static_cast<std::size_t>(k * p.L + l)];
    }
    log.records.push_back(std::move(rec));
  }
  validate(log);
  return log;
}

Json to_json(const CurveFit& fit) {
  Json j = to_json(ScalarFn(fit.params));
  j["rmse"] = fit.rmse;
  return j;
}

Json to_json(const FittedDynamics& fit) {
  Json lv = Json::array();
  for (const auto& c : fit.lambda_bar_viewer_hat) lv.push_back(to_json(c));
  Json lp = Json::array();
  for (const auto& c : fit.lambda_bar_provider_hat) lp.push_back(to_json(c));
  Json f = Json::array();
  for (const auto& row : fit.f_hat) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(to_json(c));
    f.push_back(r);
  }
  return Json{{"lambda_bar_viewer", lv}, {"lambda_bar_provider", lp}, {"f", f}};
}

FittedDynamics fitted_dynamics_from_json(const Json& j) {
  const auto curve = [](const Json& c) {
    const ScalarFn fn = scalar_fn_from_json(c);
    if (!std::holds_alternative<SaturatingExp>(fn)) {
      throw ConfigError("fitted curves must be SaturatingExp");
    }
    return CurveFit{std::get<SaturatingExp>(fn), c.contains("rmse") ? num(c, "rmse") : 0.0};
  };
  FittedDynamics fit;
  for (const auto& c : field(j, "lambda_bar_viewer")) fit.lambda_bar_viewer_hat.push_back(curve(c));
  for (const auto& c : field(j, "lambda_bar_provider")) {
    fit.lambda_bar_provider_hat.push_back(curve(c));
  }
  for (const auto& row : field(j, "f")) {
    std::vector<CurveFit> r;
    for (const auto& c : row) r.push_back(curve(c));
    fit.f_hat.push_back(std::move(r));
  }
  return fit;
}

void write_regret_csv(const RegretReport& r, std::ostream& out) {
  out << "t,total,population,policy,const,cumulative\n";
  for (std::size_t t = 0; t < r.per_step_total.size(); ++t) {
    out << t << ',' << format_double(r.per_step_total[t]) << ','
        << format_double(r.per_step_population[t]) << ',' << format_double(r.per_step_policy[t])
        << ',' << format_double(r.per_step_const[t]) << ','
        << format_double(r.cumulative_total[t]) << '\n';
  }
}

Json regret_summary(const RegretSuite& suite) {
  Json reports = Json::object();
  for (const auto& [name, r] : suite.reports) {
    reports[name] = Json{{"mean_total", r.mean_total},
                         {"mean_population", r.mean_population()},
                         {"mean_policy", r.mean_policy()},
                         {"mean_const", r.mean_const()},
                         {"cumulative_total",
                          r.cumulative_total.empty() ? 0.0 : r.cumulative_total.back()}};
  }
  return Json{{"baseline", suite.baseline}, {"reports", reports}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace twoside
