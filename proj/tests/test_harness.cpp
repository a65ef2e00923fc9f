// Copyright 2026 The tsvd-sim developers
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "tsvd/harness.hpp"

using namespace tsvd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long count_lines(const std::string& text) {
  long n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("tsvd_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("tensor generator is seed-deterministic with calibrated entries") {
  Tensor3 a = gen_tensor(4, 4, 4, 0, false);
  Tensor3 b = gen_tensor(4, 4, 4, 0, false);
  double mean = 0.0;
  bool in_range = true;
  double diff = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double v = a.at(i, j, k).real();
        mean += v;
        in_range &= v >= 0.0 && v < 1.0 && a.at(i, j, k).imag() == 0.0;
        diff = std::max(diff, std::abs(a.at(i, j, k) - b.at(i, j, k)));
      }
  mean /= 64.0;
  CHECK(diff == 0.0);
  CHECK(in_range);
  CHECK(mean > 0.4);
  CHECK(mean < 0.6);

  Tensor3 c = gen_tensor(4, 4, 4, 1, false);
  CHECK(frob_dist(a, c) > 1e-3);

  Tensor3 u = gen_tensor(4, 4, 4, 0, true);
  CHECK(u.frob_norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(frob_dist(u, Tensor3(4, 4, 4)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("threshold sweep artifacts are byte-stable across runs and thread counts") {
  ExperimentConfig cfg;
  cfg.experiment = "fig-threshold-sweep";
  cfg.seed = 3;
  cfg.rows = cfg.cols = cfg.depth = 2;
  cfg.np_list = {3};
  cfg.grid_points = 12;

  TempDir d1("sweep1"), d2("sweep2"), d3("sweep3");
  cfg.out_dir = d1.str();
  cfg.threads = 1;
  ExperimentArtifacts a1 = run_experiment(cfg);
  cfg.out_dir = d2.str();
  ExperimentArtifacts a2 = run_experiment(cfg);
  cfg.out_dir = d3.str();
  cfg.threads = 3;
  ExperimentArtifacts a3 = run_experiment(cfg);

  std::string csv = slurp(a1.csv_path);
  CHECK(csv == slurp(a2.csv_path));
  CHECK(csv == slurp(a3.csv_path));
  CHECK(count_lines(csv) == 1 + 12);
  CHECK(csv.rfind("np,tau,dist_q_orig,dist_c_orig,dist_q_c\n", 0) == 0);

  nlohmann::json manifest = nlohmann::json::parse(slurp(a1.manifest_path));
  CHECK(manifest["experiment"] == "fig-threshold-sweep");
  CHECK(manifest["seed"] == 3);
  CHECK(manifest.contains("library"));
  CHECK(manifest.contains("prng"));
  CHECK(manifest.contains("wall_seconds"));

  std::string svg = slurp(a1.svg_path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("training-curve experiments are deterministic and well-shaped") {
  ExperimentConfig cfg;
  cfg.experiment = "fig-err-vs-cost";
  cfg.seed = 5;
  cfg.rows = cfg.cols = cfg.depth = 2;
  cfg.draws = 6;
  cfg.T_list = {2};
  cfg.layer_list = {1};

  TempDir d1("cost1"), d2("cost2");
  cfg.out_dir = d1.str();
  cfg.threads = 1;
  ExperimentArtifacts a1 = run_experiment(cfg);
  cfg.out_dir = d2.str();
  cfg.threads = 3;
  ExperimentArtifacts a2 = run_experiment(cfg);
  std::string csv = slurp(a1.csv_path);
  CHECK(csv == slurp(a2.csv_path));
  CHECK(count_lines(csv) == 1 + 6);
  CHECK(csv.rfind("draw,cost,frobenius_error\n", 0) == 0);

  cfg.experiment = "fig-mse-vs-T";
  cfg.tensors = 2;
  cfg.iters = 3;
  cfg.T_list = {1, 2};
  TempDir d3("mse1"), d4("mse2");
  cfg.out_dir = d3.str();
  cfg.threads = 2;
  ExperimentArtifacts m1 = run_experiment(cfg);
  cfg.out_dir = d4.str();
  cfg.threads = 1;
  ExperimentArtifacts m2 = run_experiment(cfg);
  std::string mcsv = slurp(m1.csv_path);
  CHECK(mcsv == slurp(m2.csv_path));
  CHECK(count_lines(mcsv) == 1 + 2);
  CHECK(mcsv.rfind("layers,T,mse\n", 0) == 0);
}

TEST_CASE("oversized experiments fail the qubit budget before any artifact is written") {
  ExperimentConfig cfg;
  cfg.experiment = "fig-threshold-sweep";
  cfg.seed = 0;
  cfg.rows = cfg.cols = cfg.depth = 16;
  cfg.np_list = {6};
  cfg.grid_points = 4;
  TempDir d("budget");
  cfg.out_dir = d.str();
  CHECK_THROWS_AS(run_experiment(cfg), BudgetError);
  CHECK(!fs::exists(fs::path(d.str()) / "fig-threshold-sweep.csv"));

  cfg.experiment = "no-such-figure";
  CHECK_THROWS_AS(run_experiment(cfg), ContractError);
}
