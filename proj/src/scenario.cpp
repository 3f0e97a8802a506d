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

#include "mintime/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mintime/csv_io.hpp"
#include "mintime/errors.hpp"

namespace mintime {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

const json& need(const json& j, const std::string& field, const std::string& path) {
  auto it = j.find(field);
  if (it == j.end()) fail(path + "." + field, "missing");
  return *it;
}

double need_number(const json& j, const std::string& field, const std::string& path) {
  const json& v = need(j, field, path);
  if (!v.is_number()) fail(path + "." + field, "must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& field, double fallback) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  return it->get<double>();
}

Vec3 need_vec3(const json& j, const std::string& field, const std::string& path) {
  const json& v = need(j, field, path);
  if (!v.is_array() || v.size() != 3) fail(path + "." + field, "must be a 3-vector");
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

std::string resolve(const std::string& file, const std::filesystem::path& base) {
  std::filesystem::path p(file);
  if (p.is_absolute()) return p.string();
  return (base / p).string();
}

CurvatureProfile parse_curvature(const json& j, const std::string& path,
                                 const std::filesystem::path& base) {
  std::string kind = need(j, "kind", path).get<std::string>();
  if (kind == "zero") return CurvatureProfile::zero();
  if (kind == "constant") return CurvatureProfile::constant(need_number(j, "k", path));
  if (kind == "tanh_difference" || kind == "sigmoid_difference") {
    double amplitude = need_number(j, "amplitude", path);
    double sharpness = need_number(j, "sharpness", path);
    double c1 = need_number(j, "c1", path);
    double c2 = need_number(j, "c2", path);
    return kind == "tanh_difference"
               ? CurvatureProfile::tanh_difference(amplitude, sharpness, c1, c2)
               : CurvatureProfile::sigmoid_difference(amplitude, sharpness, c1, c2);
  }
  if (kind == "csv") {
    return CurvatureProfile::from_csv(
        resolve(need(j, "file", path).get<std::string>(), base));
  }
  fail(path + ".kind", "unknown profile kind '" + kind + "'");
}

BoundProfile parse_bound(const json& j, int num_nodes, double ds, const std::string& path,
                         const std::filesystem::path& base) {
  if (j.is_number()) return BoundProfile::constant(num_nodes, ds, j.get<double>());
  std::string kind = need(j, "kind", path).get<std::string>();
  if (kind == "constant") {
    return BoundProfile::constant(num_nodes, ds, need_number(j, "value", path));
  }
  if (kind == "sigmoid") {
    return sigmoid_bound(num_nodes, ds, need_number(j, "s_mid", path),
                         need_number(j, "width", path), need_number(j, "hi", path),
                         need_number(j, "lo", path));
  }
  if (kind == "sigmoid_valley") {
    return sigmoid_valley_bound(num_nodes, ds, need_number(j, "c1", path),
                                need_number(j, "c2", path), need_number(j, "width", path),
                                need_number(j, "hi", path), need_number(j, "lo", path));
  }
  if (kind == "csv") {
    CsvTable t = read_csv(resolve(need(j, "file", path).get<std::string>(), base));
    int cs = t.column("s") >= 0 ? t.column("s") : 0;
    int cv = t.column("value") >= 0 ? t.column("value") : 1;
    if (t.rows.size() < 2 || t.cols() < 2) fail(path, "bound CSV needs columns s,value");
    BoundProfile p;
    p.ds = ds;
    p.values.resize(static_cast<size_t>(num_nodes));
    size_t seg = 0;
    for (int i = 0; i < num_nodes; ++i) {
      double s = i * ds;
      while (seg + 2 < t.rows.size() && t.rows[seg + 1][cs] < s) ++seg;
      double s0 = t.rows[seg][cs], s1 = t.rows[seg + 1][cs];
      double v0 = t.rows[seg][cv], v1 = t.rows[seg + 1][cv];
      double u = s1 > s0 ? std::clamp((s - s0) / (s1 - s0), 0.0, 1.0) : 0.0;
      p.values[static_cast<size_t>(i)] = (1.0 - u) * v0 + u * v1;
    }
    return p;
  }
  fail(path + ".kind", "unknown bound kind '" + kind + "'");
}

std::vector<Vec3> read_cloud(const std::string& file) {
  CsvTable t = read_csv(file);
  if (t.cols() < 3) throw ConfigError("obstacle cloud needs columns x,y,z: " + file);
  int cx = t.column("x") >= 0 ? t.column("x") : 0;
  int cy = t.column("y") >= 0 ? t.column("y") : 1;
  int cz = t.column("z") >= 0 ? t.column("z") : 2;
  std::vector<Vec3> pts;
  pts.reserve(t.rows.size());
  for (const auto& row : t.rows) pts.emplace_back(row[cx], row[cy], row[cz]);
  return pts;
}

BoundSide parse_side(const std::string& s, const std::string& path) {
  if (s == "w1_min") return BoundSide::kW1Min;
  if (s == "w1_max") return BoundSide::kW1Max;
  if (s == "w2_min") return BoundSide::kW2Min;
  if (s == "w2_max") return BoundSide::kW2Max;
  fail(path, "unknown bound side '" + s + "'");
}

StateVec parse_state(const json& j, const std::string& path) {
  StateVec x;
  x[kW1] = number_or(j, "w1", 0.0);
  x[kW2] = number_or(j, "w2", 0.0);
  Vec3 v = need_vec3(j, "v", path);
  Vec3 phi = j.contains("phi") ? need_vec3(j, "phi", path) : Vec3::Zero();
  x.segment<3>(kV1) = v;
  x.segment<3>(kRoll) = phi;
  return x;
}

}  // namespace

Scenario load_scenario(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("cannot open config: " + config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  const std::filesystem::path base = std::filesystem::path(config_path).parent_path();

  Scenario sc;
  sc.raw = j;
  sc.name = j.value("name", std::filesystem::path(config_path).stem().string());

  // Frame path.
  const json& fp = need(j, "frame_path", "config");
  CurvatureProfile curvature = parse_curvature(need(fp, "profile", "frame_path"),
                                               "frame_path.profile", base);
  Vec3 binormal = need_vec3(fp, "binormal", "frame_path");
  Vec3 p0 = need_vec3(fp, "p0", "frame_path");
  Vec3 t0 = need_vec3(fp, "t0", "frame_path");
  double length = need_number(fp, "length", "frame_path");
  double ds = number_or(fp, "ds", 1e-3);
  try {
    if (fp.contains("torsion") && need(fp, "torsion", "frame_path").value("kind", "zero") != "zero") {
      TorsionProfile torsion = parse_curvature(fp["torsion"], "frame_path.torsion", base);
      Vec3 n0 = need_vec3(fp, "normal0", "frame_path");
      sc.path = std::make_shared<FramePath>(
          FramePath::build_spatial(curvature, torsion, p0, t0, n0, length, ds));
    } else {
      sc.path = std::make_shared<FramePath>(
          FramePath::build_planar(curvature, binormal, p0, t0, length, ds));
    }
  } catch (const Error& e) {
    throw ConfigError("frame_path: " + std::string(e.what()));
  }
  const int n = sc.path->num_nodes();

  // Vehicle.
  const json& veh = need(j, "vehicle", "config");
  sc.vehicle.mass = need_number(veh, "mass", "vehicle");
  sc.vehicle.gravity = number_or(veh, "gravity", 9.81);
  if (!(sc.vehicle.mass > 0.0)) fail("vehicle.mass", "must be positive");
  if (!(sc.vehicle.gravity > 0.0)) fail("vehicle.gravity", "must be positive");

  // Bounds.
  const json& b = need(j, "bounds", "config");
  sc.bounds.roll_rate_max = need_number(b, "roll_rate_max", "bounds");
  sc.bounds.pitch_rate_max = need_number(b, "pitch_rate_max", "bounds");
  sc.bounds.yaw_rate_max = need_number(b, "yaw_rate_max", "bounds");
  sc.bounds.thrust_min = need_number(b, "thrust_min", "bounds");
  sc.bounds.thrust_max = need_number(b, "thrust_max", "bounds");
  sc.bounds.roll_max = parse_bound(need(b, "roll_angle_max", "bounds"), n, ds,
                                   "bounds.roll_angle_max", base);
  sc.bounds.pitch_max = parse_bound(need(b, "pitch_angle_max", "bounds"), n, ds,
                                    "bounds.pitch_angle_max", base);
  sc.bounds.yaw_max = parse_bound(need(b, "yaw_angle_max", "bounds"), n, ds,
                                  "bounds.yaw_angle_max", base);
  try {
    sc.bounds.validate();
  } catch (const Error& e) {
    throw ConfigError("bounds: " + std::string(e.what()));
  }

  // Corridor.
  const json& cor = need(j, "corridor", "config");
  std::string section = need(cor, "section", "corridor").get<std::string>();
  sc.corridor.min_clearance = number_or(cor, "min_clearance", 0.05);
  if (section == "circular") {
    sc.corridor.section = CorridorSpec::Section::kCircular;
    sc.corridor.r_obs = parse_bound(need(cor, "r_obs", "corridor"), n, ds, "corridor.r_obs", base);
  } else if (section == "rectangular") {
    sc.corridor.section = CorridorSpec::Section::kRectangular;
    sc.corridor.w1_max = parse_bound(need(cor, "w1_max", "corridor"), n, ds, "corridor.w1_max", base);
    sc.corridor.w2_max = parse_bound(need(cor, "w2_max", "corridor"), n, ds, "corridor.w2_max", base);
    sc.corridor.w1_min = cor.contains("w1_min")
                             ? parse_bound(cor["w1_min"], n, ds, "corridor.w1_min", base)
                             : BoundProfile::negated(sc.corridor.w1_max);
    sc.corridor.w2_min = cor.contains("w2_min")
                             ? parse_bound(cor["w2_min"], n, ds, "corridor.w2_min", base)
                             : BoundProfile::negated(sc.corridor.w2_max);
  } else {
    fail("corridor.section", "must be 'circular' or 'rectangular'");
  }

  if (cor.contains("obstacles")) {
    if (sc.corridor.section != CorridorSpec::Section::kRectangular) {
      fail("corridor.obstacles", "obstacle shaping requires a rectangular section");
    }
    int idx = 0;
    for (const auto& ob : cor["obstacles"]) {
      std::string where = "corridor.obstacles[" + std::to_string(idx++) + "]";
      std::string file = resolve(need(ob, "file", where).get<std::string>(), base);
      BoundSide side = parse_side(need(ob, "affects", where).get<std::string>(), where + ".affects");
      double margin = number_or(ob, "margin", 0.0);
      int window = ob.contains("window") ? ob["window"].get<int>() : 2;
      try {
        sc.corridor = restrict_bounds(sc.corridor, read_cloud(file), *sc.path, side, margin,
                                      window);
      } catch (const Error& e) {
        throw ConfigError(where + ": " + std::string(e.what()));
      }
    }
  }
  try {
    sc.corridor.validate(sc.path->max_curvature());
    sc.path->check_local_clearance(sc.corridor.max_bound_magnitude());
  } catch (const Error& e) {
    throw ConfigError("corridor: " + std::string(e.what()));
  }

  // Init.
  if (j.contains("init")) {
    const json& init = j["init"];
    sc.init.speed = number_or(init, "speed", 0.5);
    sc.init.yaw = number_or(init, "yaw", 0.0);
    sc.init.blend_length = number_or(init, "blend_length", 1.5);
    if (init.contains("start_velocity")) {
      sc.init.start_velocity = need_vec3(init, "start_velocity", "init");
    }
    if (init.contains("end_velocity")) {
      sc.init.end_velocity = need_vec3(init, "end_velocity", "init");
    }
  }

  // Initial condition: defaults to the on-path cruise state.
  if (j.contains("x0")) {
    sc.x0 = parse_state(j["x0"], "x0");
  } else {
    sc.x0.setZero();
    Vec3 v = sc.init.start_velocity ? *sc.init.start_velocity
                                    : Vec3(sc.init.speed * sc.path->frame(0).t);
    sc.x0.segment<3>(kV1) = v;
    sc.x0[kYaw] = sc.init.yaw;
  }

  // Final box.
  const json& fb = need(j, "final_box", "config");
  if (fb.contains("tolerances")) {
    const json& tol = fb["tolerances"];
    if (!tol.is_array() || tol.size() != kStateDim) {
      fail("final_box.tolerances", "must be an 8-vector");
    }
    StateVec t;
    for (int i = 0; i < kStateDim; ++i) t[i] = tol[static_cast<size_t>(i)].get<double>();
    StateVec center = sc.x0;
    if (fb.contains("center")) center = parse_state(fb["center"], "final_box.center");
    sc.final_box = FinalBox::centered(center, t);
  } else {
    const json& lo = need(fb, "min", "final_box");
    const json& hi = need(fb, "max", "final_box");
    if (!lo.is_array() || lo.size() != kStateDim || !hi.is_array() || hi.size() != kStateDim) {
      fail("final_box", "min/max must be 8-vectors");
    }
    for (int i = 0; i < kStateDim; ++i) {
      sc.final_box.lo[i] = lo[static_cast<size_t>(i)].get<double>();
      sc.final_box.hi[i] = hi[static_cast<size_t>(i)].get<double>();
    }
    try {
      sc.final_box.validate();
    } catch (const Error& e) {
      throw ConfigError("final_box: " + std::string(e.what()));
    }
  }

  // Solver.
  if (j.contains("solver")) {
    const json& sol = j["solver"];
    if (sol.contains("barrier")) {
      const json& bar = sol["barrier"];
      sc.schedule.factor = number_or(bar, "factor", 0.2);
      sc.schedule.eps_floor = number_or(bar, "eps_floor", 1e-4);
      sc.schedule.nu_floor = number_or(bar, "nu_floor", 1e-4);
      sc.schedule.max_outer = bar.contains("max_outer") ? bar["max_outer"].get<int>() : 8;
    }
    if (sol.contains("newton")) {
      const json& nw = sol["newton"];
      sc.newton.tol = number_or(nw, "tol", 1e-6);
      sc.newton.max_iterations =
          nw.contains("max_iterations") ? nw["max_iterations"].get<int>() : 50;
      sc.newton.armijo_alpha = number_or(nw, "armijo_alpha", 0.4);
      sc.newton.backtrack_factor = number_or(nw, "backtrack_factor", 0.5);
      sc.newton.gamma_min = number_or(nw, "gamma_min", 1e-6);
      std::string hess = nw.value("hessian", "exact");
      if (hess == "exact") {
        sc.newton.hessian = NewtonHessian::kExact;
      } else if (hess == "gauss_newton") {
        sc.newton.hessian = NewtonHessian::kGaussNewton;
      } else {
        fail("solver.newton.hessian", "must be 'exact' or 'gauss_newton'");
      }
    }
    if (sol.contains("exec")) {
      const json& ex = sol["exec"];
      bool parallel = ex.value("parallel", true);
      sc.newton.exec.mode = parallel ? ExecMode::kParallel : ExecMode::kSerial;
      sc.newton.exec.threads = ex.contains("threads") ? ex["threads"].get<int>() : 0;
    }
  }
  sc.export_dt = j.contains("export") ? number_or(j["export"], "dt", 2e-3) : 2e-3;
  try {
    sc.schedule.validate();
  } catch (const Error& e) {
    throw ConfigError("solver.barrier: " + std::string(e.what()));
  }

  // Gain scales are read later by the problem factory; validate here.
  if (j.contains("solver") && j["solver"].contains("gain")) {
    const json& g = j["solver"]["gain"];
    if (number_or(g, "r_scale", 1.0) <= 0.0) fail("solver.gain.r_scale", "must be positive");
  }
  return sc;
}

std::string check_scenario(const std::string& config_path) {
  Scenario sc = load_scenario(config_path);
  std::ostringstream os;
  os << "scenario '" << sc.name << "': path L = " << sc.path->length()
     << " m, ds = " << sc.path->ds() << " m, nodes = " << sc.path->num_nodes()
     << ", max curvature = " << sc.path->max_curvature() << " 1/m, section = "
     << (sc.corridor.section == CorridorSpec::Section::kCircular ? "circular" : "rectangular")
     << ", arc-length deviation = " << sc.path->max_arclength_deviation()
     << ", frame residual = " << sc.path->max_frenet_residual();
  return os.str();
}

}  // namespace mintime
