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

#include "tsvd/truncation.hpp"

#include <cmath>

namespace tsvd {

namespace {

const std::vector<std::string> kLoaderRegs = {"wlsv", "rsv", "wface"};
const std::vector<std::string> kWalkRegs = {"wlsv", "rsv", "wface", "face"};
const TsveBinding kPipelineBinding = {"wlsv", "rsv", "wface", "face", "phase", "abs"};

// Pipeline layout without the magnitude register, which the factored sweep
// never needs (see the class comment in the header).
RegisterLayout sweep_layout(const PreparedOperators& ops, int np) {
  RegisterLayout lay;
  lay.add("lsv", log2_exact(ops.rows));
  lay.add("rsv", log2_exact(ops.cols));
  lay.add("face", log2_exact(ops.depth));
  lay.add("wface", log2_exact(ops.depth));
  lay.add("wlsv", log2_exact(ops.rows));
  lay.add("phase", np);
  lay.add("flag", 1);
  return lay;
}

// Reads the flag-0 branch back into tensor form.  scale restores physical
// units: branch amplitude * fro_norm * sqrt(success probability).  Weight on
// basis states where any ancilla differs from |0> is summed into
// aux_residual and optionally enforced against the 10 epsilon^2 budget.
void extract_output(const QState& s, const PreparedOperators& ops, double scale,
                    double epsilon, bool enforce_residual, TruncationResult* res) {
  const RegisterLayout& lay = s.layout();
  const int total = lay.total_qubits();
  long data_mask = 0;
  for (const char* name : {"lsv", "rsv", "face"}) {
    const Register& r = lay.reg(name);
    if (r.width > 0) data_mask |= ((1L << r.width) - 1) << (total - r.offset - r.width);
  }

  res->output = Tensor3(ops.rows, ops.cols, ops.depth);
  double residual = 0.0;
  const std::vector<Cplx>& amps = s.amps();
  for (long idx = 0; idx < static_cast<long>(amps.size()); ++idx) {
    if ((idx & ~data_mask) != 0) {
      residual += std::norm(amps[idx]);
      continue;
    }
    long i = lay.reg_value(idx, "lsv");
    long j = lay.reg_value(idx, "rsv");
    long k = lay.reg_value(idx, "face");
    res->output.at(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)) =
        amps[idx] * scale;
  }
  res->aux_residual = residual;
  if (enforce_residual && residual > 10.0 * epsilon * epsilon)
    throw NumericalError("truncation left " + std::to_string(residual) +
                         " of the kept branch off the ancilla |0> space "
                         "(budget 10*epsilon^2 = " + std::to_string(10.0 * epsilon * epsilon) + ")");
}

}  // namespace

RegisterLayout truncation_layout(const PreparedOperators& ops, int np, int d) {
  if (np < 1 || d < 1 || d > np)
    throw ContractError("truncation_layout: need 1 <= d <= np (d=" + std::to_string(d) +
                        ", np=" + std::to_string(np) + ")");
  RegisterLayout lay;
  lay.add("lsv", log2_exact(ops.rows));
  lay.add("rsv", log2_exact(ops.cols));
  lay.add("face", log2_exact(ops.depth));
  lay.add("wface", log2_exact(ops.depth));
  lay.add("wlsv", log2_exact(ops.rows));
  lay.add("phase", np);
  lay.add("abs", d);
  lay.add("flag", 1);
  return lay;
}

SveParams resolve_params(const Tensor3& t, double tau, const TruncateOptions& opt,
                         std::vector<std::string>* warnings) {
  SveParams p = sve_params(t, opt.epsilon, tau);
  int guard = p.np - p.d;
  if (opt.np_override > 0) {
    p.np = opt.np_override;
    p.d = opt.d_override > 0 ? opt.d_override : opt.np_override - 1;
    if (warnings && p.np < p.d + guard)
      warnings->push_back("phase register narrower than the epsilon budget asks for (np < d + " +
                          std::to_string(guard) + ")");
  } else if (opt.d_override > 0) {
    p.d = opt.d_override;
    p.np = opt.d_override + guard;
  }
  if (p.d < 1 || p.d > p.np)
    throw ContractError("resolve_params: need 1 <= d <= np (d=" + std::to_string(p.d) +
                        ", np=" + std::to_string(p.np) + ")");
  return p;
}

void prepare_tensor_state(QState& s, const PreparedOperators& ops) {
  s.hadamard_all("face");
  apply_p_prime(s, ops, PrepBinding{"lsv", "rsv", "face", "wface"}, false);
  s.hadamard_all("face");
  s.hadamard_all("wface");
  apply_q_prime(s, ops, {"lsv", "rsv", "face"}, false);
}

QState prepare_tensor_state(const PreparedOperators& ops) {
  RegisterLayout lay;
  lay.add("lsv", log2_exact(ops.rows));
  lay.add("rsv", log2_exact(ops.cols));
  lay.add("face", log2_exact(ops.depth));
  lay.add("wface", log2_exact(ops.depth));
  QState s(lay);
  prepare_tensor_state(s, ops);
  return s;
}

long comparator_threshold(double tau, double fro_norm, int d,
                          std::vector<std::string>* warnings) {
  if (tau < 0.0) throw ContractError("comparator_threshold: tau must be nonnegative");
  if (fro_norm <= 0.0) throw ContractError("comparator_threshold: fro_norm must be positive");
  double ratio = tau / fro_norm;
  if (ratio > 1.0) {
    ratio = 1.0;
    if (warnings)
      warnings->push_back("tau exceeds the tensor norm and was clamped to it; "
                          "every singular value is below threshold");
  }
  double theta_tau = 2.0 * std::acos(ratio);
  return static_cast<long>(std::floor(std::ldexp(theta_tau / (2.0 * kPi), d) + 0.5));
}

void apply_comparator(QState& s, const std::string& abs_reg, const std::string& flag_reg,
                      long t_int) {
  if (s.layout().reg(flag_reg).width != 1)
    throw ContractError("apply_comparator: flag register must be exactly one qubit");
  if (t_int < 0) throw ContractError("apply_comparator: negative threshold integer");
  s.permute_basis({abs_reg, flag_reg}, [t_int](long v) {
    long a = v >> 1;
    long fl = v & 1;
    return (a << 1) | (fl ^ (a > t_int ? 1L : 0L));
  });
}

TruncationResult truncate(const Tensor3& t, double tau, const TruncateOptions& opt) {
  if (tau < 0.0) throw ContractError("truncate: tau must be nonnegative");
  TruncationResult res;
  res.params = resolve_params(t, tau, opt, &res.warnings);
  if (res.params.alpha <= 1e-12)
    throw PostselectError("truncate: every singular value lies below tau, the kept branch is empty");

  PreparedOperators ops = build_operators(t);
  RegisterLayout lay = truncation_layout(ops, res.params.np, res.params.d);
  res.total_qubits = lay.total_qubits();

  QState s(lay);  // budget check happens here, before the dense walk build
  WalkOperator walk = build_walk(ops);
  prepare_tensor_state(s, ops);
  tsve_pass(s, ops, walk, res.params, kPipelineBinding, false);
  long t_int = comparator_threshold(tau, res.params.fro_norm, res.params.d, &res.warnings);
  apply_comparator(s, "abs", "flag", t_int);
  tsve_pass(s, ops, walk, res.params, kPipelineBinding, true);

  res.success_prob = s.postselect("flag", 0);
  extract_output(s, ops, res.params.fro_norm * std::sqrt(res.success_prob),
                 res.params.epsilon, true, &res);
  return res;
}

TruncationSweep::TruncationSweep(const Tensor3& t, double epsilon, int np, int d)
    : tensor_(t),
      epsilon_(epsilon),
      np_(np),
      d_(d),
      ops_(build_operators(t)),
      base_params_(resolve_params(t, 0.0, TruncateOptions{epsilon, np, d}, nullptr)),
      layout_(sweep_layout(ops_, np)),
      cache_(layout_),
      walk_(build_walk(ops_)) {
  max_sigma_ = all_sigmas(factorize(tensor_)).front();
  prepare_tensor_state(cache_, ops_);
  apply_q_prime(cache_, ops_, kLoaderRegs, false);
  qpe(cache_, walk_.w, "phase", kWalkRegs, false);
}

TruncationResult TruncationSweep::run(double tau) const {
  if (tau < 0.0) throw ContractError("TruncationSweep::run: tau must be nonnegative");
  TruncationResult res;
  res.params = resolve_params(tensor_, tau, TruncateOptions{epsilon_, np_, d_}, &res.warnings);
  res.total_qubits = layout_.total_qubits();

  QState s = cache_;
  long t_int = comparator_threshold(tau, res.params.fro_norm, d_, &res.warnings);
  const int np = np_, d = d_;
  s.permute_basis({"phase", "flag"}, [np, d, t_int](long v) {
    long p = v >> 1;
    long fl = v & 1;
    long sv = signed_value(p, np);
    long mag = sv < 0 ? -sv : sv;
    return (p << 1) | (fl ^ ((mag >> (np - d)) > t_int ? 1L : 0L));
  });
  qpe(s, walk_.w, "phase", kWalkRegs, true);
  apply_q_prime(s, ops_, kLoaderRegs, true);

  double p0 = s.probabilities({"flag"})[0];
  if (p0 <= 0.0) {
    res.output = Tensor3(ops_.rows, ops_.cols, ops_.depth);
    res.success_prob = 0.0;
    res.aux_residual = 0.0;
    return res;
  }
  res.success_prob = s.postselect("flag", 0);
  extract_output(s, ops_, res.params.fro_norm * std::sqrt(res.success_prob),
                 epsilon_, false, &res);
  return res;
}

RecommendResult recommend(const Tensor3& t, long row, double tau, std::uint64_t seed,
                          const TruncateOptions& opt) {
  if (tau < 0.0) throw ContractError("recommend: tau must be nonnegative");
  if (row < 0 || row >= t.rows())
    throw ContractError("recommend: row " + std::to_string(row) + " out of range");

  RecommendResult res;
  std::vector<std::string> warnings;
  res.params = resolve_params(t, tau, opt, &warnings);
  PreparedOperators ops = build_operators(t);
  if (ops.zero_row_slice[static_cast<size_t>(row)])
    throw DegenerateInputError("recommend: row slice " + std::to_string(row) +
                               " of the tensor is zero");
  if (res.params.alpha <= 1e-12)
    throw PostselectError("recommend: every singular value lies below tau");

  RegisterLayout lay = truncation_layout(ops, res.params.np, res.params.d);
  QState s(lay);
  WalkOperator walk = build_walk(ops);
  s.set_basis_state({{"lsv", row}});
  apply_row_prep(s, ops, {"lsv", "rsv", "face"});
  tsve_pass(s, ops, walk, res.params, kPipelineBinding, false);
  long t_int = comparator_threshold(tau, res.params.fro_norm, res.params.d, &warnings);
  apply_comparator(s, "abs", "flag", t_int);
  tsve_pass(s, ops, walk, res.params, kPipelineBinding, true);

  res.success_prob = s.postselect("flag", 0);
  res.marginal = s.probabilities({"rsv", "face"});
  SplitMix64 rng(seed);
  long jk = s.sample({"rsv", "face"}, rng);
  res.col = jk / ops.depth;
  res.slice = jk % ops.depth;
  return res;
}

}  // namespace tsvd
