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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsvd/classical.hpp"
#include "tsvd/fourier.hpp"
#include "tsvd/harness.hpp"
#include "tsvd/qsim.hpp"
#include "tsvd/state_prep.hpp"
#include "tsvd/tensor.hpp"
#include "tsvd/truncation.hpp"
#include "tsvd/tsve.hpp"
#include "tsvd/variational.hpp"

using nlohmann::ordered_json;

namespace {

// Shared flags, parsed at the top level and visible to every subcommand.
struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;
  bool dump_state = false;
};

ordered_json tensor_to_json(const tsvd::Tensor3& t) {
  ordered_json j;
  j["dims"] = {t.rows(), t.cols(), t.depth()};
  ordered_json entries = ordered_json::array();
  for (const tsvd::Cplx& c : t.data()) entries.push_back({c.real(), c.imag()});
  j["entries"] = std::move(entries);
  return j;
}

ordered_json real_matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (long i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (long k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json complex_matrix_json(const tsvd::Mat& m) {
  ordered_json rows = ordered_json::array();
  for (long i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (long k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json params_summary_json(const tsvd::SveParams& p) {
  ordered_json j;
  j["fro_norm"] = p.fro_norm;
  j["epsilon"] = p.epsilon;
  j["tau"] = p.tau;
  j["alpha"] = p.alpha;
  j["delta"] = p.delta;
  j["d"] = p.d;
  j["np"] = p.np;
  return j;
}

// Debug statevector dump: register layout plus every basis amplitude with
// non-negligible weight.
void write_state_dump(const tsvd::QState& s, const std::string& out_dir) {
  ordered_json j;
  j["qubits"] = s.num_qubits();
  ordered_json regs = ordered_json::array();
  for (const tsvd::Register& r : s.layout().regs())
    regs.push_back({{"name", r.name}, {"width", r.width}});
  j["registers"] = std::move(regs);
  ordered_json amps = ordered_json::array();
  for (long i = 0; i < s.dim(); ++i) {
    const tsvd::Cplx& a = s.amps()[i];
    if (std::norm(a) < 1e-28) continue;
    amps.push_back({i, a.real(), a.imag()});
  }
  j["amplitudes"] = std::move(amps);
  std::filesystem::create_directories(out_dir);
  std::string path = (std::filesystem::path(out_dir) / "state.json").string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
  std::cerr << "state dump written to " << path << "\n";
}

int cmd_classical(const std::string& path, double epsilon) {
  tsvd::Tensor3 t = tsvd::load_tensor_json_file(path);
  tsvd::SveParams p = tsvd::sve_params(t, epsilon, 0.0);
  tsvd::TsvdFactors f = tsvd::factorize(t);
  ordered_json j;
  j["dims"] = {t.rows(), t.cols(), t.depth()};
  j["fro_norm"] = p.fro_norm;
  ordered_json faces = ordered_json::array();
  for (int k = 0; k < t.depth(); ++k) {
    ordered_json face;
    face["face"] = k;
    ordered_json sig = ordered_json::array();
    for (long i = 0; i < f.faces[k].sigma.size(); ++i) sig.push_back(f.faces[k].sigma(i));
    face["sigmas"] = std::move(sig);
    faces.push_back(std::move(face));
  }
  j["faces"] = std::move(faces);
  j["thetas"] = real_matrix_json(p.thetas);
  j["delta"] = p.delta;
  j["d"] = p.d;
  j["np"] = p.np;
  std::cout << j.dump(2) << "\n";
  return 0;
}

// Per-branch diagnostic: feed the column-side vector of one transformed-face
// singular triple through phase estimation and report where the magnitude
// register lands.
int cmd_sve(const std::string& path, double epsilon, int np_override, int d_override,
            const GlobalOpts& g) {
  tsvd::Tensor3 t = tsvd::load_tensor_json_file(path);
  tsvd::SveParams p = tsvd::sve_params(t, epsilon, 0.0);
  // The ledger widths resolve every distinct theta, which can exceed the desk
  // budget on dense spectra; the overrides trade resolution for size.
  if (np_override > 0) {
    p.np = np_override;
    if (d_override <= 0) p.d = np_override - 1;
  }
  if (d_override > 0) p.d = d_override;
  tsvd::TsvdFactors f = tsvd::factorize(t);
  tsvd::PreparedOperators ops = tsvd::build_operators(t);
  tsvd::WalkOperator walk = tsvd::build_walk(ops);
  tsvd::Mat q4 = tsvd::q_prime_matrix4(ops);

  int nr = tsvd::log2_exact(t.rows());
  int nc = tsvd::log2_exact(t.cols());
  int nf = tsvd::log2_exact(t.depth());
  tsvd::RegisterLayout lay{{"wlsv", nr}, {"rsv", nc},     {"wface", nf},
                           {"face", nf}, {"phase", p.np}, {"abs", p.d}};
  tsvd::Mat fmat = tsvd::fourier_matrix(t.depth());

  ordered_json branches = ordered_json::array();
  bool dumped = false;
  long r = std::min(t.rows(), t.cols());
  for (int k = 0; k < t.depth(); ++k) {
    for (long i = 0; i < r; ++i) {
      tsvd::QState s(lay);
      // Column-side vector of this branch: |0> on both walk ancillas, the
      // right singular vector on rsv and the Fourier column on the face copy.
      tsvd::Vec inject = tsvd::Vec::Zero(q4.cols());
      for (int jj = 0; jj < t.cols(); ++jj)
        for (int kk = 0; kk < t.depth(); ++kk) {
          long idx = (static_cast<long>(jj) * t.depth() + 0) * t.depth() + kk;
          inject(idx) = f.faces[k].right(jj, i) * fmat(kk, k);
        }
      s.set_state_on({"wlsv", "rsv", "wface", "face"}, q4 * inject);
      tsvd::qpe(s, walk.w, "phase", {"wlsv", "rsv", "wface", "face"});
      tsvd::abs_phase(s, "phase", "abs");
      std::vector<double> probs = s.probabilities({"abs"});
      long best = 0;
      for (long c = 1; c < static_cast<long>(probs.size()); ++c)
        if (probs[c] > probs[best]) best = c;
      ordered_json b;
      b["face"] = k;
      b["index"] = i;
      b["sigma"] = f.faces[k].sigma(i);
      b["theta"] = p.thetas(i, k);
      b["abs_code"] = best;
      b["theta_from_code"] = 2.0 * tsvd::kPi * best / (1L << p.d);
      b["probability"] = probs[best];
      branches.push_back(std::move(b));
      if (g.dump_state && !dumped) {
        write_state_dump(s, g.out_dir);
        dumped = true;
      }
    }
  }
  ordered_json j;
  j["epsilon"] = epsilon;
  j["d"] = p.d;
  j["np"] = p.np;
  j["fro_norm"] = p.fro_norm;
  j["branches"] = std::move(branches);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_truncate(const std::string& path, double tau, const tsvd::TruncateOptions& opt,
                 const GlobalOpts& g) {
  tsvd::Tensor3 t = tsvd::load_tensor_json_file(path);
  if (g.dump_state) {
    tsvd::PreparedOperators ops = tsvd::build_operators(t);
    write_state_dump(tsvd::prepare_tensor_state(ops), g.out_dir);
  }
  tsvd::TruncationResult r = tsvd::truncate(t, tau, opt);
  ordered_json j;
  j["tau"] = tau;
  j["success_prob"] = r.success_prob;
  j["aux_residual"] = r.aux_residual;
  j["total_qubits"] = r.total_qubits;
  j["params"] = params_summary_json(r.params);
  j["warnings"] = r.warnings;
  j["output"] = tensor_to_json(r.output);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_recommend(const std::string& path, long row, double tau,
                  const tsvd::TruncateOptions& opt, const GlobalOpts& g) {
  tsvd::Tensor3 t = tsvd::load_tensor_json_file(path);
  tsvd::RecommendResult r = tsvd::recommend(t, row, tau, g.seed, opt);
  ordered_json j;
  j["row"] = row;
  j["tau"] = tau;
  j["seed"] = g.seed;
  j["col"] = r.col;
  j["face"] = r.slice;
  j["success_prob"] = r.success_prob;
  j["params"] = params_summary_json(r.params);
  j["marginal"] = r.marginal;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_variational(const std::string& path, const tsvd::VariationalOptions& opt,
                    const GlobalOpts& g) {
  tsvd::Tensor3 t = tsvd::load_tensor_json_file(path);
  tsvd::VtsvdResult r = tsvd::optimize(t, opt);
  if (g.dump_state) {
    tsvd::QState s = tsvd::variational_circuit(t, r.params, 0);
    write_state_dump(s, g.out_dir);
  }
  ordered_json j;
  j["T"] = r.T;
  j["layers"] = opt.layers;
  j["iters"] = opt.iters;
  j["seed"] = opt.seed;
  j["magnitude_only"] = opt.magnitude_only;
  j["objective"] = r.objective;
  ordered_json alpha = ordered_json::array(), beta = ordered_json::array();
  for (long i = 0; i < r.params.alpha.size(); ++i) alpha.push_back(r.params.alpha(i));
  for (long i = 0; i < r.params.beta.size(); ++i) beta.push_back(r.params.beta(i));
  j["alpha"] = std::move(alpha);
  j["beta"] = std::move(beta);
  j["sigma_prime"] = real_matrix_json(r.sigma_prime);
  j["diag_values"] = complex_matrix_json(r.diag_values);
  j["objective_trace"] = r.objective_trace;
  j["reconstructed"] = tensor_to_json(r.reconstructed);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_figure(tsvd::ExperimentConfig cfg, const GlobalOpts& g) {
  cfg.seed = g.seed;
  cfg.out_dir = g.out_dir;
  cfg.threads = g.threads;
  tsvd::ExperimentArtifacts art = tsvd::run_experiment(cfg);
  std::cout << art.csv_path << "\n" << art.manifest_path << "\n" << art.svg_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tensor SVD simulator: classical tube-transform SVD, statevector phase-estimation "
      "pipeline, variational diagonalization, and figure experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base PRNG seed")->capture_default_str();
  app.add_option("--out", g.out_dir, "output directory for artifact files")
      ->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for figure grids")
      ->capture_default_str();
  app.add_flag("--dump-state", g.dump_state,
               "write a statevector debug dump (state.json) where applicable");

  // gen
  int gn_rows = 4, gn_cols = 4, gn_depth = 4;
  bool gn_raw = false;
  CLI::App* gn = app.add_subcommand(
      "gen", "write a seeded random tensor (uniform entries, unit norm) as JSON");
  gn->add_option("--dims", [&](const std::vector<std::string>& v) {
        gn_rows = std::stoi(v.at(0));
        gn_cols = std::stoi(v.at(1));
        gn_depth = std::stoi(v.at(2));
        return true;
      },
      "tensor dimensions: rows cols depth")
      ->expected(3);
  gn->add_flag("--raw", gn_raw, "skip the unit-norm scaling");

  // classical
  std::string cl_path;
  double cl_eps = 0.25;
  CLI::App* cl = app.add_subcommand(
      "classical", "per-face singular values and phase-register sizing as JSON");
  cl->add_option("tensor", cl_path, "tensor JSON file")->required()->check(CLI::ExistingFile);
  cl->add_option("--epsilon", cl_eps, "phase-estimation precision target")
      ->capture_default_str();

  // sve
  std::string sv_path;
  double sv_eps = 0.25;
  CLI::App* sv = app.add_subcommand(
      "sve", "per-branch phase estimation diagnostic: most likely magnitude code per "
             "singular value");
  sv->add_option("tensor", sv_path, "tensor JSON file")->required()->check(CLI::ExistingFile);
  sv->add_option("--epsilon", sv_eps, "phase-estimation precision target")
      ->capture_default_str();
  int sv_np = -1, sv_d = -1;
  sv->add_option("--np", sv_np, "phase register width override");
  sv->add_option("--d", sv_d, "magnitude register width override");

  // truncate
  std::string tr_path;
  double tr_tau = 0.0;
  tsvd::TruncateOptions tr_opt;
  CLI::App* tr = app.add_subcommand("truncate", "threshold the singular spectrum on a "
                                                "simulated register and print the result");
  tr->add_option("tensor", tr_path, "tensor JSON file")->required()->check(CLI::ExistingFile);
  tr->add_option("--tau", tr_tau, "singular value threshold")->required();
  tr->add_option("--epsilon", tr_opt.epsilon, "phase-estimation precision target")
      ->capture_default_str();
  tr->add_option("--np", tr_opt.np_override, "phase register width override");
  tr->add_option("--d", tr_opt.d_override, "magnitude register width override");

  // recommend
  std::string rc_path;
  long rc_row = 0;
  double rc_tau = 0.0;
  tsvd::TruncateOptions rc_opt;
  CLI::App* rc = app.add_subcommand(
      "recommend", "sample a (column, face) pair from the truncated row state");
  rc->add_option("tensor", rc_path, "tensor JSON file")->required()->check(CLI::ExistingFile);
  rc->add_option("--row", rc_row, "row index to recommend for")->required();
  rc->add_option("--tau", rc_tau, "singular value threshold")->required();
  rc->add_option("--epsilon", rc_opt.epsilon, "phase-estimation precision target")
      ->capture_default_str();
  rc->add_option("--np", rc_opt.np_override, "phase register width override");
  rc->add_option("--d", rc_opt.d_override, "magnitude register width override");

  // variational
  std::string va_path;
  tsvd::VariationalOptions va_opt;
  CLI::App* va = app.add_subcommand(
      "variational", "optimize the block-diagonal ansatz pair and print the result");
  va->add_option("tensor", va_path, "tensor JSON file")->required()->check(CLI::ExistingFile);
  va->add_option("--T", va_opt.T, "number of diagonal entries kept")->capture_default_str();
  va->add_option("--layers", va_opt.layers, "ansatz layers")->capture_default_str();
  va->add_option("--iters", va_opt.iters, "optimizer iterations")->capture_default_str();
  va->add_option("--lr", va_opt.lr, "optimizer step size")->capture_default_str();
  va->add_flag("--magnitude-only", va_opt.magnitude_only,
               "reconstruct from nonnegative magnitudes instead of complex diagonal values");

  // figure experiments
  tsvd::ExperimentConfig f1;
  f1.experiment = "fig-threshold-sweep";
  CLI::App* fig1 = app.add_subcommand(
      "fig-threshold-sweep",
      "quantum vs classical truncation distance over a threshold grid");
  fig1->add_option("--np-list", f1.np_list, "phase register widths")
      ->delimiter(',')
      ->capture_default_str();
  fig1->add_option("--d", f1.d_override,
                   "fixed magnitude register width (default: np-1 per run)");
  fig1->add_option("--epsilon", f1.epsilon, "phase-estimation precision target")
      ->capture_default_str();
  fig1->add_option("--grid-points", f1.grid_points, "threshold grid size")
      ->capture_default_str();
  fig1->add_option("--tau-grid", f1.tau_grid, "explicit threshold grid")->delimiter(',');
  fig1->add_option("--dims", [&f1](const std::vector<std::string>& v) {
        f1.rows = std::stoi(v.at(0));
        f1.cols = std::stoi(v.at(1));
        f1.depth = std::stoi(v.at(2));
        return true;
      },
      "tensor dimensions: rows cols depth")
      ->expected(3);

  tsvd::ExperimentConfig f2;
  f2.experiment = "fig-err-vs-cost";
  f2.T_list = {4};
  f2.layer_list = {1};
  CLI::App* fig2 = app.add_subcommand(
      "fig-err-vs-cost",
      "reconstruction error against cost over random ansatz parameter draws");
  fig2->add_option("--draws", f2.draws, "number of parameter draws")->capture_default_str();
  int f2_T = 4, f2_layers = 1;
  fig2->add_option("--T", f2_T, "number of diagonal entries kept")->capture_default_str();
  fig2->add_option("--layers", f2_layers, "ansatz layers")->capture_default_str();

  tsvd::ExperimentConfig f3;
  f3.experiment = "fig-mse-vs-T";
  CLI::App* fig3 = app.add_subcommand(
      "fig-mse-vs-T", "mean squared reconstruction error per kept diagonal count");
  fig3->add_option("--tensors", f3.tensors, "number of random tensors")->capture_default_str();
  fig3->add_option("--layers-list", f3.layer_list, "ansatz layer counts")
      ->delimiter(',')
      ->capture_default_str();
  fig3->add_option("--T-list", f3.T_list, "kept diagonal counts")
      ->delimiter(',')
      ->capture_default_str();
  fig3->add_option("--iters", f3.iters, "optimizer iterations per run")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gn->parsed()) {
      tsvd::save_tensor_json(tsvd::gen_tensor(gn_rows, gn_cols, gn_depth, g.seed, !gn_raw),
                             std::cout);
      return 0;
    }
    if (cl->parsed()) return cmd_classical(cl_path, cl_eps);
    if (sv->parsed()) return cmd_sve(sv_path, sv_eps, sv_np, sv_d, g);
    if (tr->parsed()) return cmd_truncate(tr_path, tr_tau, tr_opt, g);
    if (rc->parsed()) return cmd_recommend(rc_path, rc_row, rc_tau, rc_opt, g);
    if (va->parsed()) {
      va_opt.seed = g.seed;
      return cmd_variational(va_path, va_opt, g);
    }
    if (fig1->parsed()) return cmd_figure(f1, g);
    if (fig2->parsed()) {
      f2.T_list = {f2_T};
      f2.layer_list = {f2_layers};
      return cmd_figure(f2, g);
    }
    if (fig3->parsed()) return cmd_figure(f3, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
