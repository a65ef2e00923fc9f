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

#include "tsvd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "tsvd/classical.hpp"
#include "tsvd/rng.hpp"
#include "tsvd/qsim.hpp"
#include "tsvd/truncation.hpp"
#include "tsvd/variational.hpp"

namespace tsvd {
namespace {

// Fixed decimal rendering keeps the CSV byte-identical across runs and
// platforms; 12 significant digits round-trip visibly while staying stable.
std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void parallel_map(long count, int threads, const std::function<void(long)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  int workers = std::min<long>(threads, count);
  std::atomic<long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          next.store(count);  // drain remaining work
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// --- minimal SVG line plots ------------------------------------------------

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<double> x;
  std::vector<Series> series;
  std::vector<double> vlines;  // dashed vertical markers in x units
};

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string svg_render(const std::vector<Panel>& panels) {
  const double kW = 640, kH = 300, kL = 70, kR = 20, kT = 34, kB = 46;
  std::string out;
  char buf[256];
  double total_h = kH * panels.size();
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\" font-size=\"12\">\n",
                kW, total_h, kW, total_h);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (size_t pi = 0; pi < panels.size(); ++pi) {
    const Panel& p = panels[pi];
    double oy = kH * pi;  // panel origin
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!p.x.empty()) {
      x0 = *std::min_element(p.x.begin(), p.x.end());
      x1 = *std::max_element(p.x.begin(), p.x.end());
    }
    bool have_y = false;
    for (const Series& s : p.series)
      for (double v : s.y) {
        if (!have_y) y0 = y1 = v, have_y = true;
        y0 = std::min(y0, v);
        y1 = std::max(y1, v);
      }
    if (x1 - x0 < 1e-300) x1 = x0 + 1;
    if (y1 - y0 < 1e-300) y1 = y0 + 1;
    double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
    auto py = [&](double y) { return oy + kT + (y1 - y) / (y1 - y0) * (kH - kT - kB); };

    // frame and ticks
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                  "stroke=\"#444\"/>\n",
                  kL, oy + kT, kW - kL - kR, kH - kT - kB);
    out += buf;
    for (int t = 0; t <= 4; ++t) {
      double xv = x0 + (x1 - x0) * t / 4.0;
      double yv = y0 + (y1 - y0) * t / 4.0;
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#444\"/>\n",
                    px(xv), oy + kH - kB, px(xv), oy + kH - kB + 4);
      out += buf;
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%s</text>\n", px(xv),
                    oy + kH - kB + 17, fmt_tick(xv).c_str());
      out += buf;
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#444\"/>\n",
                    kL - 4, py(yv), kL, py(yv));
      out += buf;
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%s</text>\n", kL - 7,
                    py(yv) + 4, fmt_tick(yv).c_str());
      out += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"14\">%s"
                  "</text>\n",
                  kL + (kW - kL - kR) / 2, oy + kT - 12, p.title.c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%s</text>\n",
                  kL + (kW - kL - kR) / 2, oy + kH - 8, p.xlabel.c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"14\" y=\"%.2f\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 14 %.2f)\">%s</text>\n",
                  oy + kT + (kH - kT - kB) / 2, oy + kT + (kH - kT - kB) / 2, p.ylabel.c_str());
    out += buf;

    for (double v : p.vlines) {
      if (v < x0 || v > x1) continue;
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#999\" "
                    "stroke-dasharray=\"4 3\"/>\n",
                    px(v), oy + kT, px(v), oy + kH - kB);
      out += buf;
    }

    for (size_t si = 0; si < p.series.size(); ++si) {
      const Series& s = p.series[si];
      if (s.y.size() != p.x.size()) throw ShapeError("svg_render: series/x length mismatch");
      std::string pts;
      for (size_t i = 0; i < s.y.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(p.x[i]), py(s.y[i]));
        pts += buf;
      }
      std::snprintf(buf, sizeof buf,
                    "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\"/>\n",
                    pts.c_str(), s.color.c_str());
      out += buf;
      std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" fill=\"%s\">%s</text>\n",
                    kW - kR - 150, oy + kT + 16 + 15 * si, s.color.c_str(), s.label.c_str());
      out += buf;
    }
  }
  out += "</svg>\n";
  return out;
}

// --- shared output plumbing ------------------------------------------------

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("run_experiment: cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("run_experiment: short write to " + path);
}

struct ExperimentOutput {
  std::string csv;
  std::vector<Panel> panels;
  nlohmann::ordered_json extra;  // experiment-specific manifest entries
};

AnsatzParams random_params(int layers, int n, int l, std::uint64_t seed) {
  long count = ansatz_param_count(layers, n, l);
  SplitMix64 rng(seed);
  AnsatzParams p;
  p.layers = layers;
  p.alpha.resize(count);
  p.beta.resize(count);
  for (long i = 0; i < count; ++i) p.alpha(i) = std::numbers::pi * (1.0 - 2.0 * rng.next_unit());
  for (long i = 0; i < count; ++i) p.beta(i) = std::numbers::pi * (1.0 - 2.0 * rng.next_unit());
  return p;
}

// --- experiments -----------------------------------------------------------

ExperimentOutput run_threshold_sweep(const ExperimentConfig& cfg) {
  if (cfg.np_list.empty()) throw ContractError("fig-threshold-sweep: np_list is empty");
  Tensor3 t = gen_tensor(cfg.rows, cfg.cols, cfg.depth, cfg.seed, true);

  // One replayable sweep per phase width; construction also validates the
  // qubit budget before anything expensive runs.
  std::vector<TruncationSweep> sweeps;
  sweeps.reserve(cfg.np_list.size());
  for (int np : cfg.np_list) {
    int d = cfg.d_override > 0 ? cfg.d_override : np - 1;
    sweeps.emplace_back(t, cfg.epsilon, np, d);
  }

  std::vector<double> grid = cfg.tau_grid;
  if (grid.empty()) {
    if (cfg.grid_points < 2) throw ContractError("fig-threshold-sweep: grid_points < 2");
    double hi = sweeps.front().max_sigma() + 0.05;
    for (int i = 0; i < cfg.grid_points; ++i)
      grid.push_back(hi * i / (cfg.grid_points - 1));
  }

  std::vector<Tensor3> classical(grid.size(), Tensor3(1, 1, 1));
  for (size_t i = 0; i < grid.size(); ++i) classical[i] = classical_truncate(t, grid[i]);

  long rows_total = static_cast<long>(cfg.np_list.size()) * grid.size();
  struct Row {
    double dq = 0, dc = 0, dqc = 0;
  };
  std::vector<Row> rows(rows_total);
  parallel_map(rows_total, cfg.threads, [&](long i) {
    size_t which = i / grid.size();
    size_t gi = i % grid.size();
    Tensor3 q = sweeps[which].run(grid[gi]).output;
    rows[i].dq = frob_dist(q, t);
    rows[i].dc = frob_dist(classical[gi], t);
    rows[i].dqc = frob_dist(q, classical[gi]);
  });

  std::vector<double> sigmas = all_sigmas(factorize(t));
  std::sort(sigmas.begin(), sigmas.end());
  sigmas.erase(std::unique(sigmas.begin(), sigmas.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               sigmas.end());

  ExperimentOutput out;
  out.csv = "np,tau,dist_q_orig,dist_c_orig,dist_q_c\n";
  for (size_t which = 0; which < cfg.np_list.size(); ++which) {
    Panel panel;
    panel.title = "truncation distance vs threshold, np=" + std::to_string(cfg.np_list[which]);
    panel.xlabel = "tau";
    panel.ylabel = "Frobenius distance";
    panel.x = grid;
    panel.vlines = sigmas;
    Series sq{"quantum vs original", "#1f77b4", {}};
    Series sc{"classical vs original", "#2ca02c", {}};
    Series sqc{"quantum vs classical", "#d62728", {}};
    for (size_t gi = 0; gi < grid.size(); ++gi) {
      const Row& r = rows[which * grid.size() + gi];
      out.csv += std::to_string(cfg.np_list[which]);
      out.csv += ',';
      out.csv += fmt_g(grid[gi]);
      out.csv += ',';
      out.csv += fmt_g(r.dq);
      out.csv += ',';
      out.csv += fmt_g(r.dc);
      out.csv += ',';
      out.csv += fmt_g(r.dqc);
      out.csv += '\n';
      sq.y.push_back(r.dq);
      sc.y.push_back(r.dc);
      sqc.y.push_back(r.dqc);
    }
    panel.series = {sq, sc, sqc};
    out.panels.push_back(std::move(panel));
  }

  out.extra["np_list"] = cfg.np_list;
  out.extra["d"] = cfg.d_override > 0 ? nlohmann::ordered_json(cfg.d_override)
                                      : nlohmann::ordered_json("np-1");
  out.extra["epsilon"] = cfg.epsilon;
  out.extra["grid_points"] = static_cast<int>(grid.size());
  out.extra["sigma_max"] = sweeps.front().max_sigma();
  return out;
}

ExperimentOutput run_err_vs_cost(const ExperimentConfig& cfg) {
  if (cfg.draws <= 0) throw ContractError("fig-err-vs-cost: draws must be positive");
  if (cfg.T_list.empty() || cfg.layer_list.empty())
    throw ContractError("fig-err-vs-cost: T_list and layer_list must be non-empty");
  Tensor3 t = gen_tensor(cfg.rows, cfg.cols, cfg.depth, cfg.seed, true);
  int n = log2_exact(cfg.rows);
  int l = log2_exact(cfg.depth);
  if (cfg.cols != cfg.rows) throw ContractError("fig-err-vs-cost: faces must be square");
  int T = cfg.T_list.front();
  int layers = cfg.layer_list.front();
  // Budget check up front, before any worker threads spawn.
  { QState probe(variational_layout(n, l)); }

  struct Pt {
    double cost = 0, err = 0;
  };
  std::vector<Pt> pts(cfg.draws);
  parallel_map(cfg.draws, cfg.threads, [&](long j) {
    AnsatzParams p = random_params(layers, n, l, cfg.seed + static_cast<std::uint64_t>(j));
    double obj = objective(t, p, T);
    pts[j].cost = 1.0 - std::ldexp(obj, n);
    Tensor3 rec = variational_reconstruct(t, p, T, true);
    pts[j].err = frob_dist(rec, t);
  });

  ExperimentOutput out;
  out.csv = "draw,cost,frobenius_error\n";
  std::vector<double> xs, ys;
  for (long j = 0; j < cfg.draws; ++j) {
    out.csv += std::to_string(j);
    out.csv += ',';
    out.csv += fmt_g(pts[j].cost);
    out.csv += ',';
    out.csv += fmt_g(pts[j].err);
    out.csv += '\n';
  }

  // Scatter rendered as a cost-sorted line so the trend is visible.
  std::vector<long> order(cfg.draws);
  for (long j = 0; j < cfg.draws; ++j) order[j] = j;
  std::sort(order.begin(), order.end(),
            [&](long a, long b) { return pts[a].cost < pts[b].cost; });
  for (long j : order) {
    xs.push_back(pts[j].cost);
    ys.push_back(pts[j].err);
  }
  Panel panel;
  panel.title = "magnitude-only reconstruction error vs cost";
  panel.xlabel = "cost";
  panel.ylabel = "Frobenius error";
  panel.x = xs;
  panel.series = {Series{"error", "#1f77b4", ys}};
  out.panels.push_back(std::move(panel));

  out.extra["draws"] = cfg.draws;
  out.extra["T"] = T;
  out.extra["layers"] = layers;
  out.extra["reconstruction"] = "magnitude-only";
  return out;
}

ExperimentOutput run_mse_vs_t(const ExperimentConfig& cfg) {
  if (cfg.tensors <= 0) throw ContractError("fig-mse-vs-T: tensors must be positive");
  if (cfg.T_list.empty() || cfg.layer_list.empty())
    throw ContractError("fig-mse-vs-T: T_list and layer_list must be non-empty");
  int n = log2_exact(cfg.rows);
  int l = log2_exact(cfg.depth);
  if (cfg.cols != cfg.rows) throw ContractError("fig-mse-vs-T: faces must be square");
  { QState probe(variational_layout(n, l)); }  // budget check before the optimization loop

  long cells = static_cast<long>(cfg.layer_list.size()) * cfg.T_list.size();
  long runs_total = cells * cfg.tensors;
  std::vector<double> sq_err(runs_total, 0.0);
  double denom = static_cast<double>(cfg.rows) * cfg.cols * cfg.depth;
  parallel_map(runs_total, cfg.threads, [&](long i) {
    long cell = i / cfg.tensors;
    long s = i % cfg.tensors;
    int layers = cfg.layer_list[cell / cfg.T_list.size()];
    int T = cfg.T_list[cell % cfg.T_list.size()];
    Tensor3 t =
        gen_tensor(cfg.rows, cfg.cols, cfg.depth, cfg.seed + static_cast<std::uint64_t>(s), true);
    VariationalOptions opt;
    opt.T = T;
    opt.layers = layers;
    opt.iters = cfg.iters;
    opt.seed = splitmix64_at(cfg.seed, 7000 + i);
    VtsvdResult r = optimize(t, opt);
    double e = frob_dist(r.reconstructed, t);
    sq_err[i] = e * e / denom;
  });

  ExperimentOutput out;
  out.csv = "layers,T,mse\n";
  Panel panel;
  panel.title = "mean squared error vs kept diagonal count";
  panel.xlabel = "T";
  panel.ylabel = "MSE";
  for (double T : cfg.T_list) panel.x.push_back(T);
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
  for (size_t li = 0; li < cfg.layer_list.size(); ++li) {
    Series s{"layers=" + std::to_string(cfg.layer_list[li]), colors[li % 5], {}};
    for (size_t ti = 0; ti < cfg.T_list.size(); ++ti) {
      long cell = li * cfg.T_list.size() + ti;
      double mse = 0.0;
      for (long k = 0; k < cfg.tensors; ++k) mse += sq_err[cell * cfg.tensors + k];
      mse /= cfg.tensors;
      out.csv += std::to_string(cfg.layer_list[li]);
      out.csv += ',';
      out.csv += std::to_string(cfg.T_list[ti]);
      out.csv += ',';
      out.csv += fmt_g(mse);
      out.csv += '\n';
      s.y.push_back(mse);
    }
    panel.series.push_back(std::move(s));
  }
  out.panels.push_back(std::move(panel));

  out.extra["tensors"] = cfg.tensors;
  out.extra["iters"] = cfg.iters;
  out.extra["T_list"] = cfg.T_list;
  out.extra["layer_list"] = cfg.layer_list;
  out.extra["reconstruction"] = "complex-diagonal";
  return out;
}

}  // namespace

Tensor3 gen_tensor(int rows, int cols, int depth, std::uint64_t seed, bool unit_norm) {
  if (rows <= 0 || cols <= 0 || depth <= 0)
    throw ContractError("gen_tensor: dimensions must be positive");
  Tensor3 t(rows, cols, depth);
  std::uint64_t ctr = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (int k = 0; k < depth; ++k) t.at(i, j, k) = u64_to_unit(splitmix64_at(seed, ctr++));
  if (unit_norm) {
    double nrm = t.frob_norm();
    if (nrm <= 0.0) throw NumericalError("gen_tensor: zero norm");
    t *= 1.0 / nrm;
  }
  return t;
}

ExperimentArtifacts run_experiment(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentOutput out;
  if (cfg.experiment == "fig-threshold-sweep") {
    out = run_threshold_sweep(cfg);
  } else if (cfg.experiment == "fig-err-vs-cost") {
    out = run_err_vs_cost(cfg);
  } else if (cfg.experiment == "fig-mse-vs-T") {
    out = run_mse_vs_t(cfg);
  } else {
    throw ContractError("run_experiment: unknown experiment '" + cfg.experiment + "'");
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(cfg.out_dir);
  std::string base = (std::filesystem::path(cfg.out_dir) / cfg.experiment).string();

  nlohmann::ordered_json manifest;
  manifest["experiment"] = cfg.experiment;
  manifest["library"] = std::string("tsvd-sim ") + kVersion;
  manifest["prng"] = "splitmix64-counter";
  manifest["seed"] = cfg.seed;
  manifest["dims"] = {cfg.rows, cfg.cols, cfg.depth};
  manifest["threads"] = cfg.threads;
  for (auto& [k, v] : out.extra.items()) manifest[k] = v;
  manifest["wall_seconds"] = wall;

  ExperimentArtifacts art;
  art.csv_path = base + ".csv";
  art.manifest_path = base + ".json";
  art.svg_path = base + ".svg";
  write_file(art.csv_path, out.csv);
  write_file(art.manifest_path, manifest.dump(2) + "\n");
  write_file(art.svg_path, svg_render(out.panels));
  return art;
}

}  // namespace tsvd
