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

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mintime/run.hpp"

namespace {

std::mutex print_mutex;

void print_line(const std::string& line) {
  std::lock_guard<std::mutex> lock(print_mutex);
  std::cout << line << std::endl;
}

// Returns 0 on success; otherwise prints the failing stage and returns 1.
int solve_one(const std::string& config, const std::string& out_root, bool serial,
              int threads) {
  std::string name;
  try {
    mintime::Scenario sc = mintime::load_scenario(config);
    name = sc.name;
    if (serial) sc.newton.exec.mode = mintime::ExecMode::kSerial;
    if (threads > 0) sc.newton.exec.threads = threads;
    auto on_outer = [&](const mintime::OuterRecord& o) {
      char buf[256];
      std::snprintf(buf, sizeof(buf),
                    "[%s] outer %d: eps=%.3g nu=%.3g cost=%.6f T=%.4f s margin=%.3g "
                    "newton=%d (%s)",
                    sc.name.c_str(), o.outer, o.params.eps, o.params.nu, o.cost, o.time,
                    o.min_stage_margin, o.newton_iterations,
                    o.converged ? "converged" : o.stop_reason.c_str());
      print_line(buf);
    };
    mintime::RunResult result = mintime::run(sc, on_outer);
    std::filesystem::path out_dir = std::filesystem::path(out_root) / sc.name;
    mintime::write_artifacts(result, out_dir.string());
    print_line("[" + sc.name + "] T = " + std::to_string(result.time_map.total()) +
               " s, artifacts in " + out_dir.string());
    if (!result.continuation.success) {
      print_line("[" + sc.name + "] failed at stage continuation: " +
                 result.continuation.diagnostics);
      return 1;
    }
    return 0;
  } catch (const mintime::ConfigError& e) {
    print_line("[" + (name.empty() ? config : name) + "] failed at stage config: " + e.what());
    return 1;
  } catch (const mintime::InfeasibleInitializationError& e) {
    print_line("[" + (name.empty() ? config : name) + "] failed at stage init: " + e.what());
    return 1;
  } catch (const std::exception& e) {
    print_line("[" + (name.empty() ? config : name) + "] failed at stage solve: " + e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-time quadrotor trajectories through corridor environments"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve one or more scenario configs");
  std::vector<std::string> configs;
  std::string out_root = "runs";
  bool serial = false;
  int threads = 0;
  solve->add_option("configs", configs, "scenario JSON config(s)")
      ->required()
      ->check(CLI::ExistingFile);
  solve->add_option("--out", out_root, "output directory root");
  solve->add_flag("--serial", serial, "run per-node kernels serially");
  solve->add_option("--threads", threads, "kernel thread count (0 = default)");

  auto* check = app.add_subcommand("check", "validate a scenario config");
  std::string check_config;
  check->add_option("config", check_config)->required()->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("export", "print a stored trajectory export");
  std::string exp_dir;
  bool exp_time = false;
  bool exp_arc = false;
  exp->add_option("dir", exp_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  exp->add_flag("--time", exp_time, "time-domain CSV");
  exp->add_flag("--arclength", exp_arc, "arc-length CSV");

  auto* plot = app.add_subcommand("plotdata", "write per-figure CSV bundles for a run");
  std::string plot_dir;
  plot->add_option("dir", plot_dir)->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      std::cout << mintime::check_scenario(check_config) << std::endl;
      return 0;
    }
    if (*exp) {
      if (exp_time == exp_arc) {
        std::cerr << "export: pass exactly one of --time / --arclength" << std::endl;
        return 1;
      }
      std::cout << mintime::export_artifact(exp_dir, exp_time);
      return 0;
    }
    if (*plot) {
      mintime::write_plot_bundles(plot_dir);
      std::cout << "plot bundles written to " << plot_dir << "/plotdata" << std::endl;
      return 0;
    }
  } catch (const mintime::ConfigError& e) {
    std::cerr << "failed at stage config: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << std::endl;
    return 1;
  }

  // solve: independent scenarios run concurrently.
  std::vector<std::thread> workers;
  std::atomic<int> failures{0};
  for (const auto& cfg : configs) {
    workers.emplace_back([&, cfg]() { failures += solve_one(cfg, out_root, serial, threads); });
  }
  for (auto& w : workers) w.join();
  return failures.load() == 0 ? 0 : 1;
}
