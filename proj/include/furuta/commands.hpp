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

// Implementations of the furuta-sim subcommands. Each returns the process
// exit code and writes human-readable output to `out`, diagnostics to `err`.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "furuta/dynamics.hpp"
#include "furuta/io.hpp"
#include "furuta/phase_portrait.hpp"
#include "furuta/scenarios.hpp"
#include "furuta/trajectory.hpp"

namespace furuta::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kIntegrationFailure = 2,
  kThresholdExceeded = 3,
};

/// Largest gap tolerated between a given inertia (or l1) and the value the
/// uniform-bar model derives from masses and lengths.
inline constexpr double kConsistencyTolerance = 1e-5;

struct ParamsReport {
  PendulumParams params;
  double I0_bar = 0.0;
  double I1_bar = 0.0;
  double l1_mid = 0.0;
  double I0_gap = 0.0;
  double I1_gap = 0.0;
  double l1_gap = 0.0;
  bool consistent = true;
};

inline ParamsReport check_params(const PendulumParams& p) {
  p.validate();
  ParamsReport r;
  r.params = p;
  r.I0_bar = inertia_arm(p.m0, p.L0);
  r.I1_bar = inertia_pendulum(p.m1, p.L1);
  r.l1_mid = p.L1 / 2.0;
  r.I0_gap = std::abs(p.I0 - r.I0_bar);
  r.I1_gap = std::abs(p.I1 - r.I1_bar);
  r.l1_gap = std::abs(p.l1 - r.l1_mid);
  r.consistent = r.I0_gap <= kConsistencyTolerance && r.I1_gap <= kConsistencyTolerance &&
                 r.l1_gap <= kConsistencyTolerance;
  return r;
}

inline void print_validation(std::ostream& err, const ValidationError& e) {
  err << "error: invalid configuration\n";
  for (const auto& f : e.errors()) err << "  " << f.field << ": " << f.message << '\n';
}

inline int cmd_params(const io::RunConfig& rc, std::ostream& out, std::ostream& err) {
  ParamsReport r;
  try {
    io::validate_run_config(rc);
    r = check_params(rc.experiment.params);
  } catch (const ValidationError& e) {
    print_validation(err, e);
    return kValidation;
  }
  const PendulumParams& p = r.params;
  auto line = [&out](const char* name, double v, const char* unit) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-22s %.10g %s\n", name, v, unit);
    out << buf;
  };
  out << "parameters\n";
  line("g", p.g, "m/s^2");
  line("L0", p.L0, "m");
  line("L1", p.L1, "m");
  line("l1", p.l1, "m");
  line("m1", p.m1, "kg");
  line("I0", p.I0, "kg*m^2");
  line("I1", p.I1, "kg*m^2");
  out << "derived (uniform bars)\n";
  line("m0 (implied by I0)", p.implied_arm_mass(), "kg");
  line("I0 = m0*L0^2/3", r.I0_bar, "kg*m^2");
  line("I1 = m1*L1^2/12", r.I1_bar, "kg*m^2");
  line("L1/2", r.l1_mid, "m");
  out << "consistency (tolerance " << kConsistencyTolerance << ")\n";
  line("|I0 - bar|", r.I0_gap, "kg*m^2");
  line("|I1 - bar|", r.I1_gap, "kg*m^2");
  line("|l1 - L1/2|", r.l1_gap, "m");
  const double mgl = p.m1 * p.g * p.l1;
  out << "equilibria\n";
  line("hanging U", -2.0 * mgl, "J (stable)");
  line("upright U", 0.0, "J (unstable)");
  if (!r.consistent) {
    err << "error: given inertias disagree with the bar model by more than "
        << kConsistencyTolerance << '\n';
    return kValidation;
  }
  out << "status: ok\n";
  return kOk;
}

inline std::string default_output(const io::RunConfig& rc, const char* stem) {
  if (!rc.output.empty()) return rc.output;
  return std::string(stem) + (rc.format == io::Format::json ? ".json" : ".csv");
}

inline void print_summary(std::ostream& out, const Trajectory& tr) {
  char buf[256];
  const State& x = tr.states.back();
  std::snprintf(buf, sizeof buf,
                "samples %zu  t_end %.6g s  method %s  steps accepted %zu rejected %zu\n",
                tr.size(), tr.t.back(), method_name(tr.method), tr.accepted_steps,
                tr.rejected_steps);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "final state theta0 %.10g  theta1 %.10g  dtheta0 %.10g  dtheta1 %.10g\n",
                x.theta0, x.theta1, x.dtheta0, x.dtheta1);
  out << buf;
  const auto work = work_piecewise_exact(tr);
  std::snprintf(buf, sizeof buf,
                "energy E(0) %.10g J  E(end) %.10g J  injected work %.10g J  "
                "max |E - E(0) - W| %.3e J\n",
                tr.E.front(), tr.E.back(), work.back(), power_balance_error(tr, work));
  out << buf;
}

inline int cmd_simulate(const io::RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    io::validate_run_config(rc);
  } catch (const ValidationError& e) {
    print_validation(err, e);
    return kValidation;
  }
  const std::string path = default_output(rc, "trajectory");
  try {
    const Trajectory tr = run_experiment(rc.experiment);
    io::write_trajectory(path, tr, rc.format);
    print_summary(out, tr);
    out << "wrote " << path << '\n';
    return kOk;
  } catch (const IntegrationFailure& f) {
    err << "error: integration failed at t=" << f.t() << " (h=" << f.h() << "): " << f.what()
        << '\n';
    if (!f.partial().empty()) {
      io::write_trajectory(path, f.partial(), rc.format);
      err << "wrote partial trajectory (" << f.partial().size() << " samples) to " << path
          << '\n';
    }
    return kIntegrationFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

inline std::string sibling_path(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

inline int cmd_phase(const io::RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    io::validate_run_config(rc);
  } catch (const ValidationError& e) {
    print_validation(err, e);
    return kValidation;
  }
  const PendulumParams& p = rc.experiment.params;
  const io::PhaseOptions& o = rc.phase;
  try {
    const PotentialCurve curve =
        potential_curve(p, {o.theta_min, o.theta_max}, o.potential_samples);
    const PhasePortrait pp = sweep_phase_space(
        p, o.levels.empty() ? default_energy_levels(p) : o.levels, o.points_per_orbit);

    std::string orbit_path = rc.output.empty() ? "portrait.csv" : rc.output;
    const std::string potential_path = sibling_path(orbit_path, "_potential.csv");
    {
      std::ofstream f(potential_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + potential_path);
      io::write_potential_csv(f, curve);
    }
    {
      std::ofstream f(orbit_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + orbit_path);
      io::write_portrait_csv(f, pp);
    }

    char buf[160];
    for (const Equilibrium& e : classify_equilibria(p)) {
      std::snprintf(buf, sizeof buf, "equilibrium theta1 %.10g  %s  U %.10g J\n", e.theta1,
                    e.kind == Stability::stable ? "stable" : "unstable", e.potential_energy);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "separatrix energy %.10g J\n", separatrix_energy(p));
    out << buf;
    for (std::size_t i : curve.minima) {
      std::snprintf(buf, sizeof buf, "potential minimum at theta1 %.10g\n", curve.theta[i]);
      out << buf;
    }
    for (std::size_t i : curve.maxima) {
      std::snprintf(buf, sizeof buf, "potential maximum at theta1 %.10g\n", curve.theta[i]);
      out << buf;
    }
    for (const auto& s : pp.skipped) {
      err << "warning: skipped level " << s.level << " J (" << s.reason << ")\n";
    }
    out << "wrote " << potential_path << " and " << orbit_path << " (" << pp.orbits.size()
        << " orbits)\n";
    return kOk;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

struct CompareOptions {
  double tol_theta0 = std::numeric_limits<double>::infinity();
  double tol_theta1 = std::numeric_limits<double>::infinity();
  double tol_dtheta0 = std::numeric_limits<double>::infinity();
  double tol_dtheta1 = std::numeric_limits<double>::infinity();
  double tol_energy = std::numeric_limits<double>::infinity();
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();

  double threshold(Channel c) const {
    switch (c) {
      case Channel::theta0: return tol_theta0;
      case Channel::theta1: return tol_theta1;
      case Channel::dtheta0: return tol_dtheta0;
      case Channel::dtheta1: return tol_dtheta1;
      case Channel::energy: return tol_energy;
    }
    return tol_energy;
  }
};

/// Samples of `tr` with t in [t_min, t_max].
inline Trajectory slice(const Trajectory& tr, double t_min, double t_max) {
  Trajectory s = tr;
  s.t.clear();
  s.states.clear();
  s.tau.clear();
  s.K.clear();
  s.U.clear();
  s.E.clear();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.t[i] < t_min || tr.t[i] > t_max) continue;
    s.push_back(tr.t[i], tr.states[i], tr.tau[i], tr.K[i], tr.U[i], tr.E[i]);
  }
  return s;
}

inline int cmd_compare(const std::string& file_a, const std::string& file_b,
                       const CompareOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const Trajectory a = slice(io::read_trajectory(file_a), opt.t_min, opt.t_max);
    const Trajectory b = io::read_trajectory(file_b);
    const ErrorReport r = compare_trajectories(a, b);

    char buf[160];
    std::snprintf(buf, sizeof buf, "span [%.6g, %.6g] s, %zu samples\n", r.t_begin, r.t_end,
                  r.samples);
    out << buf;
    std::snprintf(buf, sizeof buf, "%-8s %14s %14s %10s %12s\n", "channel", "max_abs", "rms",
                  "t_max", "threshold");
    out << buf;
    bool within = true;
    for (Channel c : kChannels) {
      const double thr = opt.threshold(c);
      const bool ok = r[c].max_abs <= thr;
      within = within && ok;
      std::snprintf(buf, sizeof buf, "%-8s %14.6e %14.6e %10.4f %12.3e %s\n", channel_name(c),
                    r[c].max_abs, r[c].rms, r[c].t_max, thr, ok ? "ok" : "EXCEEDED");
      out << buf;
    }
    out << io::report_to_json(r).dump() << '\n';
    return within ? kOk : kThresholdExceeded;
  } catch (const io::SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace furuta::cli
