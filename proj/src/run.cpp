// Copyright 2026 The mintime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mintime/run.hpp"

#include <filesystem>
#include <fstream>

#include "mintime/csv_io.hpp"
#include "mintime/errors.hpp"

namespace mintime {
namespace {

using nlohmann::json;

constexpr double kActivityThreshold = 0.02;  // normalized margin for "active"
constexpr double kBandFraction = 0.01;       // "at the bound" band, fraction of range

json margins_and_activity(const TransverseProblem& prob, const Trajectory& traj) {
  const auto names = stage_constraint_names(prob.corridor());
  const int nc = stage_constraint_count(prob.corridor());
  const int n = traj.num_nodes();

  std::vector<double> min_margin(static_cast<size_t>(nc),
                                 std::numeric_limits<double>::infinity());
  std::vector<std::vector<std::pair<double, double>>> intervals(static_cast<size_t>(nc));
  std::vector<int> open(static_cast<size_t>(nc), -1);

  double c[kMaxStageConstraints];
  for (int i = 0; i < n; ++i) {
    eval_stage_constraints(traj.x[i], traj.u[i], prob.bounds(), prob.corridor(), i, c);
    for (int k = 0; k < nc; ++k) {
      double margin = -c[k];
      min_margin[static_cast<size_t>(k)] = std::min(min_margin[static_cast<size_t>(k)], margin);
      bool active = margin < kActivityThreshold;
      auto& start = open[static_cast<size_t>(k)];
      if (active && start < 0) start = i;
      if ((!active || i == n - 1) && start >= 0) {
        int end = active ? i : i - 1;
        intervals[static_cast<size_t>(k)].emplace_back(start * traj.ds, end * traj.ds);
        start = -1;
      }
    }
  }

  json out = json::array();
  for (int k = 0; k < nc; ++k) {
    json item;
    item["name"] = names[static_cast<size_t>(k)];
    item["min_margin"] = min_margin[static_cast<size_t>(k)];
    json iv = json::array();
    for (auto& [a, bnd] : intervals[static_cast<size_t>(k)]) iv.push_back({a, bnd});
    item["activity_intervals"] = iv;
    out.push_back(item);
  }
  return out;
}

// Classify roll rate against its bounds: 'L'ower band, 'U'pper band, or
// interior; return the compressed band sequence and switch count.
std::pair<std::string, int> roll_rate_switches(const TransverseProblem& prob,
                                               const Trajectory& traj) {
  const double pmax = prob.bounds().roll_rate_max;
  const double band = kBandFraction * 2.0 * pmax;
  std::string seq;
  for (const auto& u : traj.u) {
    double p = u[kRollRate];
    char cls = '-';
    if (std::abs(p - (-pmax)) <= band) cls = 'L';
    if (std::abs(p - pmax) <= band) cls = 'U';
    if (cls != '-' && (seq.empty() || seq.back() != cls)) seq.push_back(cls);
  }
  int switches = seq.empty() ? 0 : static_cast<int>(seq.size()) - 1;
  return {seq, switches};
}

json build_summary(const TransverseProblem& prob, const RunResult& r) {
  const Trajectory& traj = r.continuation.trajectory;
  const FramePath& path = prob.path();
  const int n = traj.num_nodes();
  json s;
  s["name"] = r.scenario.name;
  s["success"] = r.continuation.success;
  if (!r.continuation.diagnostics.empty()) s["diagnostics"] = r.continuation.diagnostics;
  s["time_T"] = r.time_map.total();
  s["initial_min_stage_margin"] = r.init.min_stage_margin;

  double peak_tangential = 0.0;
  double worst_speed_drop = 0.0;
  double prev_speed = traj.x[0].segment<3>(kV1).norm();
  for (int i = 0; i < n; ++i) {
    const Vec3 v = traj.x[i].segment<3>(kV1);
    peak_tangential = std::max(peak_tangential, path.frame(i).t.dot(v));
    double speed = v.norm();
    if (i > 0) worst_speed_drop = std::max(worst_speed_drop, prev_speed - speed);
    prev_speed = speed;
  }
  s["peak_tangential_speed"] = peak_tangential;
  s["max_speed_decrease"] = worst_speed_drop;

  StateVec diff = traj.x.back() - r.scenario.x0;
  s["final_state_distance_to_x0"] = diff.norm();

  const double fmax = prob.bounds().thrust_max;
  int near_upper = 0;
  for (const auto& u : traj.u) {
    if (u[kThrust] >= fmax * (1.0 - kBandFraction)) ++near_upper;
  }
  s["thrust_upper_fraction"] = static_cast<double>(near_upper) / n;

  auto [seq, switches] = roll_rate_switches(prob, traj);
  s["roll_rate_band_sequence"] = seq;
  s["roll_rate_switch_count"] = switches;

  s["min_stage_margin"] = min_stage_margin_over(prob, traj);
  s["min_final_margin"] = prob.min_final_margin(traj.x.back());
  s["constraints"] = margins_and_activity(prob, traj);

  json outers = json::array();
  for (const auto& o : r.continuation.outers) {
    json row;
    row["outer"] = o.outer;
    row["eps"] = o.params.eps;
    row["nu"] = o.params.nu;
    row["eps_f"] = o.params.eps_f;
    row["nu_f"] = o.params.nu_f;
    row["cost"] = o.cost;
    row["time_T"] = o.time;
    row["min_stage_margin"] = o.min_stage_margin;
    row["min_final_margin"] = o.min_final_margin;
    row["newton_iterations"] = o.newton_iterations;
    row["converged"] = o.converged;
    row["stop_reason"] = o.stop_reason;
    outers.push_back(row);
  }
  s["outer_iterations"] = outers;
  return s;
}

std::vector<double> state_row(const Trajectory& traj, const TimeMap& tmap,
                              const FramePath& path, int i) {
  const StateVec& x = traj.x[i];
  const InputVec& u = traj.u[i];
  Vec3 pos = path.reconstruct_position(i * traj.ds, x[kW1], x[kW2]);
  return {i * traj.ds, tmap.t[i], x[kW1],    x[kW2],    x[kV1],   x[kV2],
          x[kV3],      x[kRoll],  x[kPitch], x[kYaw],   u[kRollRate], u[kPitchRate],
          u[kYawRate], u[kThrust], pos.x(),  pos.y(),   pos.z()};
}

}  // namespace

TransverseProblem make_problem(const Scenario& sc) {
  TransverseProblem prob(sc.path.get(), sc.vehicle, sc.bounds, sc.corridor, sc.final_box);
  if (sc.raw.contains("solver") && sc.raw["solver"].contains("gain")) {
    const json& g = sc.raw["solver"]["gain"];
    prob.set_gain_scales(g.value("q_scale", 1.0), g.value("r_scale", 1.0));
  }
  return prob;
}

RunResult run(const Scenario& sc, const std::function<void(const OuterRecord&)>& on_outer) {
  RunResult result;
  result.scenario = sc;
  TransverseProblem prob = make_problem(sc);

  try {
    result.init = initial_trajectory(prob, sc.init, sc.x0);
  } catch (const Error& e) {
    throw InfeasibleInitializationError("stage init: " + std::string(e.what()));
  }

  result.continuation = continuation(prob, result.init.trajectory, sc.schedule, sc.newton);
  if (on_outer) {
    for (const auto& o : result.continuation.outers) on_outer(o);
  }
  result.time_map = build_time_map(result.continuation.trajectory, *sc.path);
  result.summary = build_summary(prob, result);
  return result;
}

void write_artifacts(const RunResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const Trajectory& traj = r.continuation.trajectory;
  const FramePath& path = *r.scenario.path;
  const int n = traj.num_nodes();

  const std::vector<std::string> arc_header = {
      "s", "t", "w1", "w2", "v1", "v2", "v3", "phi", "theta", "psi",
      "p", "q", "r", "F", "px", "py", "pz"};
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) rows.push_back(state_row(traj, r.time_map, path, i));
  write_csv((fs::path(out_dir) / "arclength.csv").string(), arc_header, rows);

  // Time-domain export: same columns with t leading.
  std::vector<std::string> time_header = {
      "t", "s", "w1", "w2", "v1", "v2", "v3", "phi", "theta", "psi",
      "p", "q", "r", "F", "px", "py", "pz"};
  auto samples = to_time_domain(traj, r.time_map, path, r.scenario.export_dt);
  std::vector<std::vector<double>> trows;
  trows.reserve(samples.size());
  for (const auto& smp : samples) {
    trows.push_back({smp.t, smp.s, smp.x[kW1], smp.x[kW2], smp.x[kV1], smp.x[kV2], smp.x[kV3],
                     smp.x[kRoll], smp.x[kPitch], smp.x[kYaw], smp.u[kRollRate],
                     smp.u[kPitchRate], smp.u[kYawRate], smp.u[kThrust], smp.position.x(),
                     smp.position.y(), smp.position.z()});
  }
  write_csv((fs::path(out_dir) / "time.csv").string(), time_header, trows);

  std::vector<std::vector<double>> tm;
  for (int i = 0; i < n; ++i) tm.push_back({i * traj.ds, r.time_map.t[i]});
  write_csv((fs::path(out_dir) / "timemap.csv").string(), {"s", "t"}, tm);

  // Bound profiles per node, for plot bundles.
  const CorridorSpec& cor = r.scenario.corridor;
  const InputStateBounds& bounds = r.scenario.bounds;
  std::vector<std::string> bh = {"s", "phi_max", "theta_max", "psi_max"};
  bool circ = cor.section == CorridorSpec::Section::kCircular;
  if (circ) {
    bh.push_back("r_obs");
  } else {
    bh.insert(bh.end(), {"w1_min", "w1_max", "w2_min", "w2_max"});
  }
  std::vector<std::vector<double>> brows;
  for (int i = 0; i < n; ++i) {
    std::vector<double> row = {i * traj.ds, bounds.roll_max.at(i), bounds.pitch_max.at(i),
                               bounds.yaw_max.at(i)};
    if (circ) {
      row.push_back(cor.r_obs.at(i));
    } else {
      row.insert(row.end(), {cor.w1_min.at(i), cor.w1_max.at(i), cor.w2_min.at(i),
                             cor.w2_max.at(i)});
    }
    brows.push_back(std::move(row));
  }
  write_csv((fs::path(out_dir) / "bounds.csv").string(), bh, brows);

  {
    std::ofstream log((fs::path(out_dir) / "solver_log.jsonl").string());
    for (const auto& [outer, it] : r.continuation.iterations) {
      json row;
      row["type"] = "newton";
      row["outer"] = outer;
      row["iteration"] = it.iteration;
      row["gamma"] = it.gamma;
      row["cost"] = it.cost;
      row["descent"] = it.descent;
      row["min_stage_margin"] = it.min_stage_margin;
      row["min_final_margin"] = it.min_final_margin;
      row["defect"] = it.defect;
      row["riccati_residual"] = it.riccati_residual;
      row["hessian_fallbacks"] = it.hessian_fallbacks;
      log << row.dump() << "\n";
    }
    for (const auto& o : r.summary["outer_iterations"]) {
      json row = o;
      row["type"] = "outer";
      log << row.dump() << "\n";
    }
  }

  {
    std::ofstream sum((fs::path(out_dir) / "summary.json").string());
    sum << r.summary.dump(2) << "\n";
  }
  {
    std::ofstream cfg((fs::path(out_dir) / "config.json").string());
    cfg << r.scenario.raw.dump(2) << "\n";
  }
}

namespace {

void write_bundle(const std::string& dir, const std::string& name,
                  const std::vector<std::string>& header,
                  const std::vector<std::vector<double>>& rows) {
  write_csv((std::filesystem::path(dir) / (name + ".csv")).string(), header, rows);
}

}  // namespace

void write_plot_bundles(const std::string& run_dir) {
  namespace fs = std::filesystem;
  const std::string arc_file = (fs::path(run_dir) / "arclength.csv").string();
  const std::string bounds_file = (fs::path(run_dir) / "bounds.csv").string();
  const std::string summary_file = (fs::path(run_dir) / "summary.json").string();
  if (!fs::exists(arc_file) || !fs::exists(bounds_file) || !fs::exists(summary_file)) {
    throw InvalidArgumentError("run directory is missing artifacts: " + run_dir);
  }
  CsvTable arc = read_csv(arc_file);
  CsvTable bnd = read_csv(bounds_file);
  json summary;
  {
    std::ifstream in(summary_file);
    in >> summary;
  }
  json cfg;
  {
    std::ifstream in((fs::path(run_dir) / "config.json").string());
    if (in) in >> cfg;
  }
  double fmin = cfg["bounds"]["thrust_min"].get<double>();
  double fmax = cfg["bounds"]["thrust_max"].get<double>();
  double pmax = cfg["bounds"]["roll_rate_max"].get<double>();
  double qmax = cfg["bounds"]["pitch_rate_max"].get<double>();
  double rmax = cfg["bounds"]["yaw_rate_max"].get<double>();

  auto col = [&](const CsvTable& t, const std::string& name) {
    int c = t.column(name);
    if (c < 0) throw InvalidArgumentError("missing column " + name);
    return c;
  };
  const std::string dir = (fs::path(run_dir) / "plotdata").string();
  fs::create_directories(dir);
  const size_t n = arc.rows.size();
  const bool circular = bnd.column("r_obs") >= 0;

  auto series = [&](const std::string& nm, std::initializer_list<std::string> arc_cols,
                    std::initializer_list<std::string> bnd_cols,
                    std::initializer_list<double> consts,
                    std::initializer_list<std::string> const_names) {
    std::vector<std::string> header = {"s"};
    std::vector<int> ac, bc;
    for (const auto& c : arc_cols) {
      header.push_back(c);
      ac.push_back(col(arc, c));
    }
    for (const auto& c : bnd_cols) {
      header.push_back(c);
      bc.push_back(col(bnd, c));
    }
    for (const auto& c : const_names) header.push_back(c);
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    int s_arc = col(arc, "s");
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> row = {arc.rows[i][s_arc]};
      for (int c : ac) row.push_back(arc.rows[i][c]);
      for (int c : bc) row.push_back(bnd.rows[i][c]);
      for (double c : consts) row.push_back(c);
      rows.push_back(std::move(row));
    }
    write_bundle(dir, nm, header, rows);
  };

  if (circular) {
    series("w1", {"w1"}, {"r_obs"}, {}, {});
    series("w2", {"w2"}, {"r_obs"}, {}, {});
    // Radial distance against the tube radius.
    {
      std::vector<std::vector<double>> rows;
      int cs = col(arc, "s"), c1 = col(arc, "w1"), c2 = col(arc, "w2"), cr = col(bnd, "r_obs");
      for (size_t i = 0; i < n; ++i) {
        double w1 = arc.rows[i][c1], w2 = arc.rows[i][c2];
        rows.push_back({arc.rows[i][cs], std::sqrt(w1 * w1 + w2 * w2), bnd.rows[i][cr]});
      }
      write_bundle(dir, "radial", {"s", "radial", "r_obs"}, rows);
    }
  } else {
    series("w1", {"w1"}, {"w1_min", "w1_max"}, {}, {});
    series("w2", {"w2"}, {"w2_min", "w2_max"}, {}, {});
  }

  // Velocity components in the moving frame come from the exported states
  // and positions; tangential speed is reported directly.
  {
    std::vector<std::vector<double>> rows;
    int cs = col(arc, "s");
    int cv1 = col(arc, "v1"), cv2 = col(arc, "v2"), cv3 = col(arc, "v3");
    for (size_t i = 0; i < n; ++i) {
      double v1 = arc.rows[i][cv1], v2 = arc.rows[i][cv2], v3 = arc.rows[i][cv3];
      rows.push_back({arc.rows[i][cs], v1, v2, v3, std::sqrt(v1 * v1 + v2 * v2 + v3 * v3)});
    }
    write_bundle(dir, "velocity", {"s", "v1", "v2", "v3", "speed"}, rows);
  }
  series("angles", {"phi", "theta", "psi"}, {"phi_max", "theta_max", "psi_max"}, {}, {});
  series("rates", {"p", "q", "r"}, {}, {pmax, qmax, rmax}, {"p_max", "q_max", "r_max"});
  series("thrust", {"F"}, {}, {fmin, fmax}, {"F_min", "F_max"});
  series("path3d", {"px", "py", "pz"}, {}, {}, {});
}

std::string export_artifact(const std::string& run_dir, bool time_domain) {
  namespace fs = std::filesystem;
  const std::string file =
      (fs::path(run_dir) / (time_domain ? "time.csv" : "arclength.csv")).string();
  std::ifstream in(file);
  if (!in) throw InvalidArgumentError("missing artifact: " + file);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace mintime
