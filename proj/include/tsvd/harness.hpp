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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsvd/tensor.hpp"

namespace tsvd {

inline constexpr const char* kVersion = "0.1.0";

// Seeded random tensor with entries i.i.d. uniform[0,1), drawn counter-style
// in row-major (i, j, k) order so the result is independent of platform and
// call history.  With unit_norm the tensor is scaled to Frobenius norm 1.
Tensor3 gen_tensor(int rows, int cols, int depth, std::uint64_t seed, bool unit_norm = true);

// Everything a figure experiment depends on.  Identical configs produce
// byte-identical CSV files.
struct ExperimentConfig {
  std::string experiment;  // fig-threshold-sweep | fig-err-vs-cost | fig-mse-vs-T
  std::uint64_t seed = 0;
  int rows = 4, cols = 4, depth = 4;
  std::string out_dir = ".";
  int threads = 1;

  // fig-threshold-sweep
  std::vector<int> np_list = {2, 3, 4, 5};
  int d_override = -1;  // fixed abs width for every n_p; -1 means d = n_p - 1
  double epsilon = 0.25;
  int grid_points = 50;
  std::vector<double> tau_grid;  // overrides the derived grid when non-empty

  // fig-err-vs-cost / fig-mse-vs-T
  int draws = 100;
  int tensors = 60;
  int iters = 500;
  std::vector<int> T_list = {1, 2, 4};
  std::vector<int> layer_list = {1, 2, 3};
};

struct ExperimentArtifacts {
  std::string csv_path;
  std::string manifest_path;
  std::string svg_path;
};

// Runs one experiment: computes every grid point (worker pool of
// cfg.threads), then writes CSV rows in grid order, a JSON manifest
// (config, library version, wall time) and a minimal SVG line plot.
ExperimentArtifacts run_experiment(const ExperimentConfig& cfg);

}  // namespace tsvd
