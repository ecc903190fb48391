// Copyright 2026 The Furuta Dynamics Authors
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

// Run configuration (JSON) and trajectory / portrait files (CSV or JSON).
//
// Trajectory CSV layout:
//
//   # furuta-trajectory
//   # key=value                 (one metadata line per key)
//   t,theta0,theta1,dtheta0,dtheta1,tau,K,U,E
//   <rows, %.17g>
//
// The JSON form carries the same metadata object and rows.

#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "furuta/errors.hpp"
#include "furuta/ode_settings.hpp"
#include "furuta/params.hpp"
#include "furuta/phase_portrait.hpp"
#include "furuta/scenarios.hpp"
#include "furuta/torque.hpp"
#include "furuta/trajectory.hpp"

namespace furuta::io {

using nlohmann::json;

inline constexpr const char* kFormatVersion = "1";
inline constexpr const char* kTrajectoryColumns = "t,theta0,theta1,dtheta0,dtheta1,tau,K,U,E";
inline constexpr const char* kPortraitColumns =
    "orbit_id,tag,theta1_wrapped,theta1_unwrapped,dtheta1,energy";

enum class Format { csv, json };

/// Malformed or inconsistent file contents.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Run configuration

struct PhaseOptions {
  std::vector<double> levels;  // empty: default_energy_levels
  std::size_t points_per_orbit = 400;
  double theta_min = -2.0 * std::numbers::pi;
  double theta_max = 2.0 * std::numbers::pi;
  std::size_t potential_samples = 1001;
};

struct RunConfig {
  ExperimentConfig experiment;
  PhaseOptions phase;
  std::string output;
  Format format = Format::csv;
};

namespace detail {

class FieldCollector {
 public:
  void add(std::string field, std::string message) {
    errors_.push_back({std::move(field), std::move(message)});
  }
  bool empty() const { return errors_.empty(); }
  std::vector<FieldError> take() { return std::move(errors_); }

  void reject_unknown(const json& obj, const std::string& prefix,
                      std::initializer_list<std::string_view> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (auto a : allowed) ok = ok || it.key() == a;
      if (!ok) add(prefix + it.key(), "unknown key");
    }
  }

  std::optional<double> number(const json& obj, const std::string& key,
                               const std::string& prefix) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      add(prefix + key, "must be a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  bool object(const json& v, const std::string& field) {
    if (!v.is_object()) {
      add(field, "must be an object");
      return false;
    }
    return true;
  }

 private:
  std::vector<FieldError> errors_;
};

inline void positive(FieldCollector& fc, const std::string& field, std::optional<double> v) {
  if (v && !(*v > 0.0 && std::isfinite(*v))) fc.add(field, "must be finite and strictly positive");
}

inline PendulumParams parse_params(const json& j, FieldCollector& fc) {
  PendulumParams p;
  if (!fc.object(j, "params")) return p;
  fc.reject_unknown(j, "params.", {"g", "L0", "L1", "l1", "m0", "m1", "I0", "I1"});
  const std::string pre = "params.";
  auto g = fc.number(j, "g", pre);
  auto L0 = fc.number(j, "L0", pre);
  auto L1 = fc.number(j, "L1", pre);
  auto l1 = fc.number(j, "l1", pre);
  auto m0 = fc.number(j, "m0", pre);
  auto m1 = fc.number(j, "m1", pre);
  auto I0 = fc.number(j, "I0", pre);
  auto I1 = fc.number(j, "I1", pre);
  for (auto [name, v] : {std::pair{"g", g}, {"L0", L0}, {"L1", L1}, {"l1", l1}, {"m0", m0},
                         {"m1", m1}, {"I0", I0}, {"I1", I1}}) {
    positive(fc, pre + name, v);
  }
  if (!L0 && !j.contains("L0")) fc.add("params.L0", "required");
  if (!L1 && !j.contains("L1")) fc.add("params.L1", "required");
  if (!m1 && !j.contains("m1")) fc.add("params.m1", "required");
  if (!I0 && !m0 && !j.contains("I0") && !j.contains("m0")) {
    fc.add("params.I0", "either I0 or m0 is required");
  }
  if (!fc.empty()) return p;

  p.g = g.value_or(9.81);
  p.L0 = *L0;
  p.L1 = *L1;
  p.m1 = *m1;
  p.l1 = l1.value_or(p.L1 / 2.0);
  p.I0 = I0 ? *I0 : inertia_arm(*m0, p.L0);
  p.m0 = m0 ? *m0 : p.implied_arm_mass();
  p.I1 = I1 ? *I1 : inertia_pendulum(p.m1, p.L1);
  for (auto& e : p.violations()) fc.add("params." + e.field, e.message);
  return p;
}

inline TorqueProfile parse_torque(const json& j, FieldCollector& fc) {
  if (!fc.object(j, "torque")) return {};
  const std::string kind = j.value("kind", std::string("step"));
  if (kind == "zero") {
    fc.reject_unknown(j, "torque.", {"kind"});
    return TorqueProfile::zero();
  }
  if (kind == "step") {
    fc.reject_unknown(j, "torque.", {"kind", "amplitude", "t_on", "t_off", "duration"});
    const double amp = fc.number(j, "amplitude", "torque.").value_or(0.5);
    const double t_on = fc.number(j, "t_on", "torque.").value_or(0.0);
    auto t_off = fc.number(j, "t_off", "torque.");
    auto duration = fc.number(j, "duration", "torque.");
    if (t_off && duration) fc.add("torque.duration", "give t_off or duration, not both");
    const double off = t_off ? *t_off : t_on + duration.value_or(0.2);
    if (!(off > t_on)) {
      fc.add("torque.t_off", "must be later than t_on");
      return {};
    }
    if (!fc.empty()) return {};
    return TorqueProfile::step(amp, t_on, off);
  }
  if (kind == "piecewise") {
    fc.reject_unknown(j, "torque.", {"kind", "breakpoints", "levels"});
    try {
      return TorqueProfile::piecewise(j.at("breakpoints").get<std::vector<double>>(),
                                      j.at("levels").get<std::vector<double>>());
    } catch (const std::exception& e) {
      fc.add("torque", e.what());
      return {};
    }
  }
  fc.add("torque.kind", "must be one of zero, step, piecewise");
  return {};
}

inline OdeSettings parse_settings(const json& j, OdeSettings s, FieldCollector& fc) {
  if (!fc.object(j, "settings")) return s;
  fc.reject_unknown(j, "settings.", {"rel_tol", "abs_tol", "h_init", "h_min", "h_max",
                                     "max_newton_iters", "newton_tol"});
  const std::string pre = "settings.";
  if (auto v = fc.number(j, "rel_tol", pre)) s.rel_tol = *v;
  if (j.contains("abs_tol")) {
    const json& a = j.at("abs_tol");
    if (a.is_number()) {
      s.abs_tol.setConstant(a.get<double>());
    } else if (a.is_array() && a.size() == 4 &&
               std::all_of(a.begin(), a.end(), [](const json& x) { return x.is_number(); })) {
      for (int i = 0; i < 4; ++i) s.abs_tol[i] = a[static_cast<std::size_t>(i)].get<double>();
    } else {
      fc.add("settings.abs_tol", "must be a number or an array of four numbers");
    }
  }
  if (auto v = fc.number(j, "h_init", pre)) s.h_init = *v;
  if (auto v = fc.number(j, "h_min", pre)) s.h_min = *v;
  if (auto v = fc.number(j, "h_max", pre)) s.h_max = *v;
  if (auto v = fc.number(j, "newton_tol", pre)) s.newton_tol = *v;
  if (j.contains("max_newton_iters")) {
    if (j.at("max_newton_iters").is_number_integer()) {
      s.max_newton_iters = j.at("max_newton_iters").get<int>();
    } else {
      fc.add("settings.max_newton_iters", "must be an integer");
    }
  }
  return s;
}

inline PhaseOptions parse_phase(const json& j, FieldCollector& fc) {
  PhaseOptions o;
  if (!fc.object(j, "phase")) return o;
  fc.reject_unknown(j, "phase.",
                    {"levels", "points_per_orbit", "theta_min", "theta_max", "potential_samples"});
  if (j.contains("levels")) {
    const json& l = j.at("levels");
    if (l.is_array() && !l.empty() &&
        std::all_of(l.begin(), l.end(), [](const json& x) { return x.is_number(); })) {
      o.levels = l.get<std::vector<double>>();
    } else {
      fc.add("phase.levels", "must be a non-empty array of numbers");
    }
  }
  auto count = [&](const char* key, std::size_t& out, std::size_t min) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
      fc.add(std::string("phase.") + key, "must be an integer >= " + std::to_string(min));
    } else {
      out = v.get<std::size_t>();
    }
  };
  count("points_per_orbit", o.points_per_orbit, 4);
  count("potential_samples", o.potential_samples, 2);
  if (auto v = fc.number(j, "theta_min", "phase.")) o.theta_min = *v;
  if (auto v = fc.number(j, "theta_max", "phase.")) o.theta_max = *v;
  if (!(o.theta_max > o.theta_min)) fc.add("phase.theta_max", "must exceed theta_min");
  return o;
}

}  // namespace detail

/// Parses and validates a run configuration. Absent keys keep their defaults;
/// unknown keys and non-physical values are rejected with one entry per field.
inline RunConfig parse_run_config(const json& j) {
  detail::FieldCollector fc;
  RunConfig rc;
  if (!j.is_object()) {
    throw ValidationError(std::vector<FieldError>{{"<root>", "configuration must be a JSON object"}});
  }
  fc.reject_unknown(j, "", {"params", "initial", "torque", "method", "settings", "t_end",
                            "sample_dt", "output", "format", "phase"});
  ExperimentConfig& ex = rc.experiment;
  if (j.contains("params")) ex.params = detail::parse_params(j.at("params"), fc);
  if (j.contains("initial")) {
    const json& v = j.at("initial");
    if (v.is_array() && v.size() == 4 &&
        std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
      ex.initial = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                    v[3].get<double>()};
      if (!ex.initial.is_finite()) fc.add("initial", "must be finite");
    } else {
      fc.add("initial", "must be an array [theta0, theta1, dtheta0, dtheta1]");
    }
  }
  if (j.contains("torque")) ex.profile = detail::parse_torque(j.at("torque"), fc);
  if (j.contains("method")) {
    const json& m = j.at("method");
    auto parsed = m.is_string() ? parse_method(m.get<std::string>()) : std::nullopt;
    if (parsed) {
      ex.method = *parsed;
    } else {
      fc.add("method", "must be one of euler, rk4, trbdf2");
    }
  }
  if (j.contains("settings")) ex.settings = detail::parse_settings(j.at("settings"), ex.settings, fc);
  if (auto v = fc.number(j, "t_end", "")) ex.t_end = *v;
  if (auto v = fc.number(j, "sample_dt", "")) ex.sample_dt = *v;
  if (j.contains("output")) {
    if (j.at("output").is_string()) {
      rc.output = j.at("output").get<std::string>();
    } else {
      fc.add("output", "must be a string");
    }
  }
  if (j.contains("format")) {
    const json& f = j.at("format");
    if (f == "csv") {
      rc.format = Format::csv;
    } else if (f == "json") {
      rc.format = Format::json;
    } else {
      fc.add("format", "must be csv or json");
    }
  }
  if (j.contains("phase")) rc.phase = detail::parse_phase(j.at("phase"), fc);
  if (!fc.empty()) throw ValidationError(fc.take());
  return rc;
}

/// Checks the parts of a configuration that command-line overrides can break.
inline void validate_run_config(const RunConfig& rc) {
  std::vector<FieldError> errors = rc.experiment.params.violations();
  for (auto& e : errors) e.field = "params." + e.field;
  for (auto& e : rc.experiment.settings.violations()) {
    errors.push_back({"settings." + e.field, e.message});
  }
  const auto& ex = rc.experiment;
  if (!(ex.t_end > 0.0) || !std::isfinite(ex.t_end)) {
    errors.push_back({"t_end", "must be finite and positive"});
  }
  if (!(ex.sample_dt > 0.0) || !std::isfinite(ex.sample_dt)) {
    errors.push_back({"sample_dt", "must be finite and positive"});
  } else if (ex.t_end > 0.0 && ex.sample_dt > ex.t_end) {
    errors.push_back({"sample_dt", "must not exceed t_end"});
  }
  if (!ex.initial.is_finite()) errors.push_back({"initial", "must be finite"});
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::vector<FieldError>{{"--config", "cannot open " + path}});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(
        std::vector<FieldError>{{"--config", std::string("not valid JSON: ") + e.what()}});
  }
  return parse_run_config(j);
}

// ---------------------------------------------------------------------------
// Trajectory files

namespace detail {

inline std::vector<std::pair<std::string, std::string>> metadata(const Trajectory& tr) {
  std::vector<std::pair<std::string, std::string>> m;
  m.emplace_back("version", kFormatVersion);
  m.emplace_back("method", method_name(tr.method));
  m.emplace_back("truncated", tr.truncated ? "true" : "false");
  m.emplace_back("accepted_steps", std::to_string(tr.accepted_steps));
  m.emplace_back("rejected_steps", std::to_string(tr.rejected_steps));
  const PendulumParams& p = tr.params;
  for (auto [k, v] : {std::pair{"g", p.g}, {"L0", p.L0}, {"L1", p.L1}, {"l1", p.l1},
                      {"m0", p.m0}, {"m1", p.m1}, {"I0", p.I0}, {"I1", p.I1}}) {
    m.emplace_back(std::string("params.") + k, fmt17(v));
  }
  const OdeSettings& s = tr.settings;
  m.emplace_back("settings.rel_tol", fmt17(s.rel_tol));
  for (int i = 0; i < 4; ++i) {
    m.emplace_back("settings.abs_tol." + std::to_string(i), fmt17(s.abs_tol[i]));
  }
  m.emplace_back("settings.h_init", fmt17(s.h_init));
  m.emplace_back("settings.h_min", fmt17(s.h_min));
  m.emplace_back("settings.h_max", fmt17(s.h_max));
  m.emplace_back("settings.max_newton_iters", std::to_string(s.max_newton_iters));
  m.emplace_back("settings.newton_tol", fmt17(s.newton_tol));
  const TorqueProfile& q = tr.profile;
  m.emplace_back("torque.kind", TorqueProfile::kind_name(q.kind));
  m.emplace_back("torque.amplitude", fmt17(q.amplitude));
  m.emplace_back("torque.t_on", fmt17(q.t_on));
  m.emplace_back("torque.t_off", fmt17(q.t_off));
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt17(v[i]);
    return s;
  };
  m.emplace_back("torque.breakpoints", join(q.breakpoints));
  m.emplace_back("torque.levels", join(q.levels));
  return m;
}

inline double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw SchemaError("cannot parse " + what + ": '" + s + "'");
  return v;
}

inline std::vector<double> split_doubles(const std::string& s, char sep, const std::string& what) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(to_double(s.substr(start, pos - start), what));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

inline void apply_metadata(Trajectory& tr, const std::map<std::string, std::string>& m) {
  auto get = [&](const std::string& k) -> const std::string& {
    auto it = m.find(k);
    if (it == m.end()) throw SchemaError("missing metadata key '" + k + "'");
    return it->second;
  };
  auto num = [&](const std::string& k) { return to_double(get(k), k); };
  if (get("version") != kFormatVersion) throw SchemaError("unsupported format version");
  auto method = parse_method(get("method"));
  if (!method) throw SchemaError("unknown method '" + get("method") + "'");
  tr.method = *method;
  tr.truncated = get("truncated") == "true";
  tr.accepted_steps = static_cast<std::size_t>(num("accepted_steps"));
  tr.rejected_steps = static_cast<std::size_t>(num("rejected_steps"));
  PendulumParams& p = tr.params;
  p.g = num("params.g");
  p.L0 = num("params.L0");
  p.L1 = num("params.L1");
  p.l1 = num("params.l1");
  p.m0 = num("params.m0");
  p.m1 = num("params.m1");
  p.I0 = num("params.I0");
  p.I1 = num("params.I1");
  if (!p.violations().empty()) throw SchemaError("metadata parameters are not physical");
  OdeSettings& s = tr.settings;
  s.rel_tol = num("settings.rel_tol");
  for (int i = 0; i < 4; ++i) s.abs_tol[i] = num("settings.abs_tol." + std::to_string(i));
  s.h_init = num("settings.h_init");
  s.h_min = num("settings.h_min");
  s.h_max = num("settings.h_max");
  s.max_newton_iters = static_cast<int>(num("settings.max_newton_iters"));
  s.newton_tol = num("settings.newton_tol");
  TorqueProfile& q = tr.profile;
  const std::string& kind = get("torque.kind");
  if (kind == "zero") {
    q.kind = TorqueProfile::Kind::zero;
  } else if (kind == "step") {
    q.kind = TorqueProfile::Kind::step;
  } else if (kind == "piecewise") {
    q.kind = TorqueProfile::Kind::piecewise;
  } else {
    throw SchemaError("unknown torque kind '" + kind + "'");
  }
  q.amplitude = num("torque.amplitude");
  q.t_on = num("torque.t_on");
  q.t_off = num("torque.t_off");
  q.breakpoints = split_doubles(get("torque.breakpoints"), ';', "torque.breakpoints");
  q.levels = split_doubles(get("torque.levels"), ';', "torque.levels");
  if (q.kind == TorqueProfile::Kind::piecewise && q.levels.size() != q.breakpoints.size() + 1) {
    throw SchemaError("piecewise torque metadata is inconsistent");
  }
}

inline void check_samples(const Trajectory& tr) {
  if (tr.size() < 2) throw SchemaError("trajectory needs at least two samples");
  for (std::size_t k = 1; k < tr.size(); ++k) {
    if (!(tr.t[k] > tr.t[k - 1])) throw SchemaError("sample times must be strictly increasing");
  }
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "# furuta-trajectory\n";
  for (const auto& [k, v] : detail::metadata(tr)) out << "# " << k << '=' << v << '\n';
  out << kTrajectoryColumns << '\n';
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const State& x = tr.states[i];
    out << fmt17(tr.t[i]) << ',' << fmt17(x.theta0) << ',' << fmt17(x.theta1) << ','
        << fmt17(x.dtheta0) << ',' << fmt17(x.dtheta1) << ',' << fmt17(tr.tau[i]) << ','
        << fmt17(tr.K[i]) << ',' << fmt17(tr.U[i]) << ',' << fmt17(tr.E[i]) << '\n';
  }
}

inline json trajectory_to_json(const Trajectory& tr) {
  json meta = json::object();
  for (const auto& [k, v] : detail::metadata(tr)) meta[k] = v;
  json rows = json::array();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const State& x = tr.states[i];
    rows.push_back({tr.t[i], x.theta0, x.theta1, x.dtheta0, x.dtheta1, tr.tau[i], tr.K[i],
                    tr.U[i], tr.E[i]});
  }
  json cols = json::array();
  for (auto c : {"t", "theta0", "theta1", "dtheta0", "dtheta1", "tau", "K", "U", "E"}) {
    cols.push_back(c);
  }
  return {{"metadata", meta}, {"columns", cols}, {"rows", rows}};
}

inline void write_trajectory_json(std::ostream& out, const Trajectory& tr) {
  out << trajectory_to_json(tr).dump(1) << '\n';
}

inline Trajectory read_trajectory_csv(std::istream& in) {
  std::map<std::string, std::string> meta;
  std::string line;
  bool header = false;
  Trajectory tr;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line[0] == '#') {
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
          const std::size_t kb = line.find_first_not_of("# ");
          meta[line.substr(kb, eq - kb)] = line.substr(eq + 1);
        }
        continue;
      }
      if (line != kTrajectoryColumns) throw SchemaError("unexpected header: '" + line + "'");
      header = true;
      detail::apply_metadata(tr, meta);
      continue;
    }
    const auto v = detail::split_doubles(line, ',', "row " + std::to_string(line_no));
    if (v.size() != 9) throw SchemaError("row " + std::to_string(line_no) + " needs 9 columns");
    tr.push_back(v[0], State{v[1], v[2], v[3], v[4]}, v[5], v[6], v[7], v[8]);
  }
  if (!header) throw SchemaError("no header row");
  detail::check_samples(tr);
  return tr;
}

inline Trajectory trajectory_from_json(const json& j) {
  if (!j.is_object() || !j.contains("metadata") || !j.contains("rows")) {
    throw SchemaError("trajectory JSON needs metadata and rows");
  }
  std::map<std::string, std::string> meta;
  for (auto it = j.at("metadata").begin(); it != j.at("metadata").end(); ++it) {
    if (!it.value().is_string()) throw SchemaError("metadata values must be strings");
    meta[it.key()] = it.value().get<std::string>();
  }
  Trajectory tr;
  detail::apply_metadata(tr, meta);
  for (const json& r : j.at("rows")) {
    if (!r.is_array() || r.size() != 9) throw SchemaError("each row needs 9 numbers");
    std::vector<double> v;
    for (const json& x : r) {
      if (!x.is_number()) throw SchemaError("rows must be numeric");
      v.push_back(x.get<double>());
    }
    tr.push_back(v[0], State{v[1], v[2], v[3], v[4]}, v[5], v[6], v[7], v[8]);
  }
  detail::check_samples(tr);
  return tr;
}

inline void write_trajectory(const std::string& path, const Trajectory& tr, Format f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (f == Format::csv) {
    write_trajectory_csv(out, tr);
  } else {
    write_trajectory_json(out, tr);
  }
  if (!out) throw std::runtime_error("error while writing " + path);
}

/// Reads either format, detected from the first non-blank character.
inline Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '{') {
    try {
      return trajectory_from_json(json::parse(content));
    } catch (const json::exception& e) {
      throw SchemaError(std::string("invalid trajectory JSON: ") + e.what());
    }
  }
  std::istringstream ss(content);
  return read_trajectory_csv(ss);
}

// ---------------------------------------------------------------------------
// Portrait files

inline void write_potential_csv(std::ostream& out, const PotentialCurve& c) {
  out << "# furuta-potential\n";
  out << "theta1,U,extremum\n";
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 0; i < c.theta.size(); ++i) {
    const char* flag = "none";
    if (imin < c.minima.size() && c.minima[imin] == i) {
      flag = "min";
      ++imin;
    } else if (imax < c.maxima.size() && c.maxima[imax] == i) {
      flag = "max";
      ++imax;
    }
    out << fmt17(c.theta[i]) << ',' << fmt17(c.energy[i]) << ',' << flag << '\n';
  }
}

inline void write_portrait_csv(std::ostream& out, const PhasePortrait& pp) {
  out << "# furuta-portrait\n";
  out << "# wrap=[-pi,pi) half-open; the stable point appears at -pi wrapped and pi unwrapped\n";
  out << "# separatrix_energy=" << fmt17(pp.separatrix_energy) << '\n';
  out << "# ground_energy=" << fmt17(pp.ground_energy) << '\n';
  out << "# points_per_orbit=" << pp.points_per_orbit << '\n';
  for (const auto& s : pp.skipped) {
    out << "# warning: skipped level " << fmt17(s.level) << " (" << s.reason << ")\n";
  }
  out << kPortraitColumns << '\n';
  for (const Orbit& o : pp.orbits) {
    for (const PhasePoint& pt : o.points) {
      out << o.id << ',' << orbit_tag_name(o.tag) << ',' << fmt17(pt.theta1) << ','
          << fmt17(pt.theta1_unwrapped) << ',' << fmt17(pt.dtheta1) << ',' << fmt17(pt.energy)
          << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Reports

inline json report_to_json(const ErrorReport& r) {
  json ch = json::object();
  for (Channel c : kChannels) {
    ch[channel_name(c)] = {{"max_abs", r[c].max_abs}, {"rms", r[c].rms}, {"t_max", r[c].t_max}};
  }
  return {{"t_begin", r.t_begin}, {"t_end", r.t_end}, {"samples", r.samples}, {"channels", ch}};
}

}  // namespace furuta::io
