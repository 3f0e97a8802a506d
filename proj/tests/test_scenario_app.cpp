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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mintime/csv_io.hpp"
#include "mintime/run.hpp"

using namespace mintime;

namespace {

std::string data_file(const std::string& name) {
  return std::string(MINTIME_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// A tiny scenario that solves in well under a second.
std::string write_mini_config(const std::string& dir, int max_outer = 2) {
  nlohmann::json j;
  j["name"] = "mini";
  j["frame_path"] = {{"profile", {{"kind", "zero"}}},
                     {"binormal", {0.0, 0.0, 1.0}},
                     {"p0", {0.0, 0.0, 0.0}},
                     {"t0", {1.0, 0.0, 0.0}},
                     {"length", 0.3},
                     {"ds", 1e-3}};
  j["vehicle"] = {{"mass", 0.0325}, {"gravity", 9.81}};
  j["bounds"] = {{"roll_rate_max", 2.0},
                 {"pitch_rate_max", 2.0},
                 {"yaw_rate_max", 2.0},
                 {"thrust_min", 0.05},
                 {"thrust_max", 0.9},
                 {"roll_angle_max", 1.2},
                 {"pitch_angle_max", 1.2},
                 {"yaw_angle_max", 1.2}};
  j["corridor"] = {{"section", "circular"}, {"r_obs", 0.5}};
  j["init"] = {{"speed", 0.5}};
  j["final_box"] = {{"min", {-0.4, -0.4, -1.0, -3.0, -3.0, -1.0, -1.0, -1.0}},
                    {"max", {0.4, 0.4, 6.0, 3.0, 3.0, 1.0, 1.0, 1.0}}};
  j["solver"] = {{"barrier", {{"max_outer", max_outer}}},
                 {"newton", {{"max_iterations", 25}}}};
  std::filesystem::create_directories(dir);
  std::string path = dir + "/mini.json";
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

}  // namespace

TEST_SUITE_BEGIN("scenario_app");

TEST_CASE("tube scenario config loads with the documented values") {
  Scenario sc = load_scenario(data_file("scenario2.json"));
  CHECK(sc.vehicle.mass == doctest::Approx(0.0325));
  CHECK(sc.bounds.roll_rate_max == doctest::Approx(15.0 * M_PI / 180.0));
  CHECK(sc.bounds.thrust_min == doctest::Approx(0.1779));
  CHECK(sc.bounds.thrust_max == doctest::Approx(0.3411));
  CHECK(sc.corridor.section == CorridorSpec::Section::kCircular);
  CHECK(sc.corridor.r_obs.at(100) == doctest::Approx(0.28));
  CHECK(sc.path->max_curvature() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sc.path->length() == doctest::Approx(4.2));
  // Initial condition defaults to the on-path cruise.
  CHECK(sc.x0[kV2] == doctest::Approx(-0.5));
}

TEST_CASE("rooms scenario config loads and shapes the corridor") {
  Scenario sc = load_scenario(data_file("scenario1.json"));
  CHECK(sc.corridor.section == CorridorSpec::Section::kRectangular);
  // Wide rooms, narrow corridor.
  CHECK(sc.corridor.w1_max.at(0) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(sc.corridor.w1_max.at(9000) == doctest::Approx(0.25).epsilon(1e-3));
  // The box blocks the wide entry at s in [2.5, 4.5] up to -0.25 after margin.
  CHECK(sc.corridor.w1_min.at(3500) == doctest::Approx(-0.25).epsilon(1e-6));
  CHECK(sc.corridor.w1_min.at(1000) == doctest::Approx(-2.0).epsilon(1e-4));
  // The pillar clips the exit swing near s = 14.3.
  CHECK(sc.corridor.w1_min.at(14300) == doctest::Approx(-0.25).epsilon(1e-2));
  // The w2 bounds stay untouched by the obstacles.
  CHECK(sc.corridor.w2_min.at(3500) == doctest::Approx(-2.0).epsilon(1e-4));
}

TEST_CASE("config errors name the offending field") {
  const std::string dir = "/tmp/mintime_cfg_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/bad.json");
    out << R"({"name":"bad","frame_path":{"profile":{"kind":"zero"},"binormal":[0,0,1],)"
        << R"("p0":[0,0,0],"t0":[1,0,0],"length":1.0},"vehicle":{"gravity":9.81},)"
        << R"("bounds":{},"corridor":{},"final_box":{}})";
  }
  CHECK_THROWS_WITH_AS(load_scenario(dir + "/bad.json"), doctest::Contains("vehicle.mass"),
                       ConfigError);
}

TEST_CASE("corridor bounds beyond the uniqueness cap are rejected at load") {
  const std::string dir = "/tmp/mintime_cfg_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/wide.json");
    // Unit curvature with a 2 m tube: exceeds 0.95 / max-curvature.
    out << R"({"name":"wide","frame_path":{"profile":{"kind":"constant","k":1.0},)"
        << R"("binormal":[0,0,1],"p0":[0,0,0],"t0":[1,0,0],"length":1.0},)"
        << R"("vehicle":{"mass":0.0325},"bounds":{"roll_rate_max":1,"pitch_rate_max":1,)"
        << R"("yaw_rate_max":1,"thrust_min":0.1,"thrust_max":0.5,)"
        << R"("roll_angle_max":1.0,"pitch_angle_max":1.0,"yaw_angle_max":1.0},)"
        << R"("corridor":{"section":"circular","r_obs":2.0},)"
        << R"("final_box":{"min":[-1,-1,-1,-1,-1,-1,-1,-1],"max":[1,1,1,1,1,1,1,1]}})";
  }
  CHECK_THROWS_WITH_AS(load_scenario(dir + "/wide.json"), doctest::Contains("uniqueness"),
                       ConfigError);
}

TEST_CASE("time map of a straight cruise is linear and definitionally consistent") {
  std::string cfg = write_mini_config("/tmp/mintime_mini");
  Scenario sc = load_scenario(cfg);
  TransverseProblem prob = make_problem(sc);
  InitialTrajectoryResult init = initial_trajectory(prob, sc.init, sc.x0);

  TimeMap map = build_time_map(init.trajectory, *sc.path);
  CHECK(map.total() == doctest::Approx(0.3 / 0.5).epsilon(1e-9));
  CHECK(map.time_at(0.15) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(map.arc_at(0.3) == doctest::Approx(0.15).epsilon(1e-6));

  // Same integrand and quadrature as the running-cost part of the objective.
  double integral = 0.0;
  for (int i = 0; i < init.trajectory.num_nodes(); ++i) {
    double w = trapezoid_weight(i, init.trajectory.num_nodes(), init.trajectory.ds);
    integral += w * running_cost(init.trajectory.x[i], sc.path->frame(i));
  }
  CHECK(std::abs(map.total() - integral) <= 1e-9 * integral);
}

TEST_CASE("time-domain resampling is monotone and spans [0, T]") {
  std::string cfg = write_mini_config("/tmp/mintime_mini");
  Scenario sc = load_scenario(cfg);
  TransverseProblem prob = make_problem(sc);
  Trajectory traj = initial_trajectory(prob, sc.init, sc.x0).trajectory;
  TimeMap map = build_time_map(traj, *sc.path);
  auto samples = to_time_domain(traj, map, *sc.path, 2e-3);
  CHECK(samples.front().t == 0.0);
  CHECK(samples.back().t == doctest::Approx(map.total()));
  for (size_t i = 1; i < samples.size(); ++i) {
    CHECK(samples[i].t > samples[i - 1].t);
    // Straight cruise: constant velocity along x.
    CHECK(samples[i].x[kV1] == doctest::Approx(0.5));
    CHECK((samples[i].position - Vec3(samples[i].s, 0.0, 0.0)).norm() < 1e-9);
  }
}

TEST_CASE("runs are deterministic: identical artifacts byte for byte") {
  std::string cfg = write_mini_config("/tmp/mintime_mini");
  Scenario sc1 = load_scenario(cfg);
  Scenario sc2 = load_scenario(cfg);
  RunResult r1 = run(sc1);
  RunResult r2 = run(sc2);
  write_artifacts(r1, "/tmp/mintime_mini/run_a");
  write_artifacts(r2, "/tmp/mintime_mini/run_b");
  for (const char* f : {"arclength.csv", "time.csv", "timemap.csv", "solver_log.jsonl",
                        "summary.json"}) {
    CHECK(slurp(std::string("/tmp/mintime_mini/run_a/") + f) ==
          slurp(std::string("/tmp/mintime_mini/run_b/") + f));
  }
}

TEST_CASE("artifacts carry the documented schema and plot bundles derive from them") {
  std::string cfg = write_mini_config("/tmp/mintime_mini");
  Scenario sc = load_scenario(cfg);
  RunResult r = run(sc);
  const std::string dir = "/tmp/mintime_mini/run_c";
  write_artifacts(r, dir);

  CsvTable arc = read_csv(dir + "/arclength.csv");
  const std::vector<std::string> expect = {"s", "t", "w1", "w2", "v1", "v2", "v3",
                                           "phi", "theta", "psi", "p", "q", "r", "F",
                                           "px", "py", "pz"};
  REQUIRE(arc.header.size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i) CHECK(arc.header[i] == expect[i]);
  CHECK(arc.rows.size() == static_cast<size_t>(sc.path->num_nodes()));

  CsvTable tim = read_csv(dir + "/time.csv");
  CHECK(tim.header[0] == "t");
  CHECK(tim.header[1] == "s");

  write_plot_bundles(dir);
  CsvTable w1 = read_csv(dir + "/plotdata/w1.csv");
  CHECK(w1.column("w1") >= 0);
  CHECK(w1.column("r_obs") >= 0);
  CsvTable thrust = read_csv(dir + "/plotdata/thrust.csv");
  CHECK(thrust.column("F_min") >= 0);
  CHECK(thrust.column("F_max") >= 0);
  CsvTable radial = read_csv(dir + "/plotdata/radial.csv");
  CHECK(radial.column("radial") >= 0);

  // Export passthrough returns the stored CSV verbatim.
  CHECK(export_artifact(dir, false) == slurp(dir + "/arclength.csv"));
  CHECK(export_artifact(dir, true) == slurp(dir + "/time.csv"));

  // The summary reports a success and a positive maneuver time.
  CHECK(r.summary["success"].get<bool>());
  CHECK(r.summary["time_T"].get<double>() > 0.0);
  CHECK(r.summary["min_stage_margin"].get<double>() > 0.0);
}

TEST_CASE("check subcommand summarizes a valid scenario") {
  std::string line = check_scenario(data_file("scenario2.json"));
  CHECK(line.find("scenario2") != std::string::npos);
  CHECK(line.find("circular") != std::string::npos);
}

TEST_SUITE_END();
