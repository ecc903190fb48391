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

// furuta-sim: parameter checks, simulation, phase portraits and trajectory
// comparison for the rotary inverted pendulum.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "furuta/commands.hpp"
#include "furuta/io.hpp"

namespace {

using furuta::io::RunConfig;

struct Overrides {
  std::optional<std::string> method;
  std::optional<double> h;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<double> t_end;
  std::optional<double> sample_dt;
  std::optional<double> amplitude;
  std::optional<double> duration;
  std::optional<std::string> initial;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

void add_run_flags(CLI::App* cmd, std::string& config, Overrides& o) {
  // --h is the step size, so help is --help only.
  cmd->set_help_flag("--help", "print this help message and exit");
  cmd->add_option("--config", config, "JSON run configuration");
  cmd->add_option("--method", o.method, "euler | rk4 | trbdf2");
  cmd->add_option("--h", o.h, "step size (fixed-step methods) or initial step (trbdf2), s");
  cmd->add_option("--rel-tol", o.rel_tol, "relative tolerance (trbdf2)");
  cmd->add_option("--abs-tol", o.abs_tol, "absolute tolerance, all components (trbdf2)");
  cmd->add_option("--t-end", o.t_end, "simulated time, s");
  cmd->add_option("--sample-dt", o.sample_dt, "output sampling interval, s");
  cmd->add_option("--amplitude", o.amplitude, "step torque amplitude, N*m");
  cmd->add_option("--duration", o.duration, "step torque duration, s");
  cmd->add_option("--initial", o.initial, "initial state \"theta0,theta1,dtheta0,dtheta1\"");
  cmd->add_option("--output", o.output, "output path");
  cmd->add_option("--format", o.format, "csv | json");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument(item);
    }
    v.push_back(x);
  }
  return v;
}

/// Loads the configuration file (if any) and applies command-line overrides.
RunConfig build_config(const std::string& path, const Overrides& o) {
  RunConfig rc = path.empty() ? RunConfig{} : furuta::io::load_run_config(path);
  auto& ex = rc.experiment;
  std::vector<furuta::FieldError> errors;
  if (o.method) {
    if (auto m = furuta::parse_method(*o.method)) {
      ex.method = *m;
    } else {
      errors.push_back({"--method", "must be one of euler, rk4, trbdf2"});
    }
  }
  if (o.h) {
    ex.settings.h_init = *o.h;
    if (*o.h > 0.0) {
      ex.settings.h_min = std::min(ex.settings.h_min, *o.h);
      ex.settings.h_max = std::max(ex.settings.h_max, *o.h);
    }
  }
  if (o.rel_tol) ex.settings.rel_tol = *o.rel_tol;
  if (o.abs_tol) ex.settings.abs_tol.setConstant(*o.abs_tol);
  if (o.t_end) ex.t_end = *o.t_end;
  if (o.sample_dt) ex.sample_dt = *o.sample_dt;
  if (o.amplitude || o.duration) {
    const double amp = o.amplitude.value_or(
        ex.profile.kind == furuta::TorqueProfile::Kind::step ? ex.profile.amplitude : 0.5);
    const double dur = o.duration.value_or(
        ex.profile.kind == furuta::TorqueProfile::Kind::step ? ex.profile.t_off - ex.profile.t_on
                                                             : 0.2);
    try {
      ex.profile = furuta::step_torque_profile(amp, dur);
    } catch (const furuta::DomainError& e) {
      errors.push_back({"--duration", e.what()});
    }
  }
  if (o.initial) {
    try {
      const auto v = parse_list(*o.initial);
      if (v.size() != 4) throw std::invalid_argument("count");
      ex.initial = {v[0], v[1], v[2], v[3]};
    } catch (const std::exception&) {
      errors.push_back({"--initial", "expected four comma-separated numbers"});
    }
  }
  if (o.output) rc.output = *o.output;
  if (o.format) {
    if (*o.format == "csv") {
      rc.format = furuta::io::Format::csv;
    } else if (*o.format == "json") {
      rc.format = furuta::io::Format::json;
    } else {
      errors.push_back({"--format", "must be csv or json"});
    }
  }
  if (!errors.empty()) throw furuta::ValidationError(std::move(errors));
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotary inverted pendulum simulator"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  std::string config;
  Overrides o;
  auto* params = app.add_subcommand("params", "validate parameters and print derived values");
  auto* simulate = app.add_subcommand("simulate", "integrate the equations of motion");
  auto* phase = app.add_subcommand("phase", "write the potential curve and phase portrait");
  for (auto* cmd : {params, simulate, phase}) add_run_flags(cmd, config, o);

  auto* compare = app.add_subcommand("compare", "compare two trajectory files");
  std::string file_a, file_b;
  furuta::cli::CompareOptions copt;
  compare->add_option("file_a", file_a, "reference trajectory")->required();
  compare->add_option("file_b", file_b, "trajectory resampled onto file_a's grid")->required();
  compare->add_option("--tol-theta0", copt.tol_theta0, "max |d theta0|, rad");
  compare->add_option("--tol-theta1", copt.tol_theta1, "max |d theta1|, rad");
  compare->add_option("--tol-dtheta0", copt.tol_dtheta0, "max |d dtheta0|, rad/s");
  compare->add_option("--tol-dtheta1", copt.tol_dtheta1, "max |d dtheta1|, rad/s");
  compare->add_option("--tol-energy", copt.tol_energy, "max |d E|, J");
  compare->add_option("--t-min", copt.t_min, "start of the compared window, s");
  compare->add_option("--t-max", copt.t_max, "end of the compared window, s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : furuta::cli::kValidation;
  }

  if (compare->parsed()) {
    return furuta::cli::cmd_compare(file_a, file_b, copt, std::cout, std::cerr);
  }

  RunConfig rc;
  try {
    rc = build_config(config, o);
  } catch (const furuta::ValidationError& e) {
    furuta::cli::print_validation(std::cerr, e);
    return furuta::cli::kValidation;
  }
  if (params->parsed()) return furuta::cli::cmd_params(rc, std::cout, std::cerr);
  if (simulate->parsed()) return furuta::cli::cmd_simulate(rc, std::cout, std::cerr);
  return furuta::cli::cmd_phase(rc, std::cout, std::cerr);
}
