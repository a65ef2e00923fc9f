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

#include "tsvd/variational.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "tsvd/classical.hpp"
#include "tsvd/rng.hpp"

namespace tsvd {
namespace {

Mat rz_gate(double th) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = std::exp(Cplx(0.0, -th / 2.0));
  m(1, 1) = std::exp(Cplx(0.0, th / 2.0));
  return m;
}

Mat ry_gate(double th) {
  Mat m(2, 2);
  double c = std::cos(th / 2.0), s = std::sin(th / 2.0);
  m << Cplx(c), Cplx(-s), Cplx(s), Cplx(c);
  return m;
}

Mat pauli_x() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Mat pauli_z() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Mat hadamard() {
  Mat m(2, 2);
  double is2 = 1.0 / std::sqrt(2.0);
  m << Cplx(is2), Cplx(is2), Cplx(is2), Cplx(-is2);
  return m;
}

enum class GateKind { kLadderCnot, kRz, kRy, kCrz, kCry };

// One ansatz gate: `a` is an ind qubit for controlled kinds and the control
// isr qubit for the ladder; `b` is always the target isr qubit.
struct AnsatzGate {
  GateKind kind;
  int a = 0;
  int b = 0;
  double angle = 0.0;
};

std::vector<AnsatzGate> ansatz_gates(const Eigen::VectorXd& v, int layers, int n, int l,
                                     bool adjoint) {
  const long per_layer = 2L * n + 2L * l * n;
  std::vector<AnsatzGate> seq;
  seq.reserve(static_cast<std::size_t>(layers) * (per_layer + n));
  for (int layer = 0; layer < layers; ++layer) {
    const long base = layer * per_layer;
    for (int q = 0; q + 1 < n; ++q) seq.push_back({GateKind::kLadderCnot, q, q + 1, 0.0});
    for (int q = 0; q < n; ++q) seq.push_back({GateKind::kRz, 0, q, v(base + q)});
    for (int q = 0; q < n; ++q) seq.push_back({GateKind::kRy, 0, q, v(base + n + q)});
    long idx = base + 2L * n;
    for (int a = 0; a < l; ++a)
      for (int b = 0; b < n; ++b) seq.push_back({GateKind::kCrz, a, b, v(idx++)});
    for (int a = 0; a < l; ++a)
      for (int b = 0; b < n; ++b) seq.push_back({GateKind::kCry, a, b, v(idx++)});
  }
  if (adjoint) {
    std::reverse(seq.begin(), seq.end());
    for (AnsatzGate& g : seq) g.angle = -g.angle;
  }
  return seq;
}

void check_ansatz_params(const AnsatzParams& p, int n, int l) {
  if (p.layers < 1) throw ContractError("ansatz: layers must be positive");
  const long want = ansatz_param_count(p.layers, n, l);
  if (p.alpha.size() != want || p.beta.size() != want)
    throw ContractError("ansatz: parameter vector length does not match layers * (2n + 2ln)");
  if (!p.alpha.allFinite() || !p.beta.allFinite())
    throw ContractError("ansatz: parameters must be finite");
}

// Dense embedding of a one-qubit gate at MSB-first qubit index q of n.
Mat embed1(int n, int q, const Mat& g) {
  const long dim = 1L << n;
  const int sig = n - 1 - q;
  Mat m = Mat::Zero(dim, dim);
  for (long v = 0; v < dim; ++v) {
    const long v0 = v & ~(1L << sig);
    const long bit = (v >> sig) & 1;
    m(v0, v) += g(0, bit);
    m(v0 | (1L << sig), v) += g(1, bit);
  }
  return m;
}

Mat embed_cnot(int n, int qc, int qt) {
  const long dim = 1L << n;
  const int sc = n - 1 - qc, st = n - 1 - qt;
  Mat m = Mat::Zero(dim, dim);
  for (long v = 0; v < dim; ++v) m(((v >> sc) & 1) ? v ^ (1L << st) : v, v) = 1.0;
  return m;
}

Mat embed_controlled(int n, int qt, const Mat& g) {
  // Control sits outside this register (an ind qubit); the caller decides
  // whether the block is active, so this is just the plain embedding.
  return embed1(n, qt, g);
}

void tensor_widths(const Tensor3& t, int* n, int* l) {
  if (t.rows() != t.cols())
    throw ShapeError("variational: tensor faces must be square");
  *n = log2_exact(t.rows());
  *l = log2_exact(t.depth());
}

double circuit_probability(const QState& s, long m, long i) {
  return std::norm(s.amplitude({{"ind", m}, {"dat", 0}, {"isr", i}}));
}

Eigen::VectorXd gradient(const Tensor3& t, AnsatzParams& p, int T, int n, int l) {
  const long npar = p.alpha.size();
  const long per_layer = 2L * n + 2L * l * n;
  const double c1 = (std::sqrt(2.0) + 1.0) / (4.0 * std::sqrt(2.0));
  const double c2 = (std::sqrt(2.0) - 1.0) / (4.0 * std::sqrt(2.0));
  Eigen::VectorXd g(2 * npar);
  for (int set = 0; set < 2; ++set) {
    Eigen::VectorXd& v = set == 0 ? p.alpha : p.beta;
    for (long j = 0; j < npar; ++j) {
      const double orig = v(j);
      double gj;
      if (j % per_layer < 2L * n) {
        // Single rotations have half-integer generator spectrum: 2-term rule.
        v(j) = orig + kPi / 2.0;
        const double plus = objective(t, p, T);
        v(j) = orig - kPi / 2.0;
        const double minus = objective(t, p, T);
        gj = 0.5 * (plus - minus);
      } else {
        // Controlled rotations add a 0 eigenvalue: exact 4-term rule.
        v(j) = orig + kPi / 2.0;
        const double a1 = objective(t, p, T);
        v(j) = orig - kPi / 2.0;
        const double a2 = objective(t, p, T);
        v(j) = orig + 3.0 * kPi / 2.0;
        const double a3 = objective(t, p, T);
        v(j) = orig - 3.0 * kPi / 2.0;
        const double a4 = objective(t, p, T);
        gj = c1 * (a1 - a2) - c2 * (a3 - a4);
      }
      v(j) = orig;
      g(set * npar + j) = gj;
    }
  }
  return g;
}

}  // namespace

long ansatz_param_count(int layers, int n, int l) {
  if (layers < 1 || n < 1 || l < 0)
    throw ContractError("ansatz_param_count: invalid layers or register widths");
  return static_cast<long>(layers) * (2L * n + 2L * l * n);
}

RegisterLayout variational_layout(int n, int l) {
  RegisterLayout layout;
  layout.add("ind", l);
  layout.add("dat", 2 * n);
  layout.add("isr", n);
  return layout;
}

void block_encode_apply(QState& s, const std::string& dat_reg, const std::string& isr_reg) {
  const int n = s.layout().reg(isr_reg).width;
  if (s.layout().reg(dat_reg).width != 2 * n)
    throw ShapeError("block_encode_apply: dat register must be twice the isr width");
  const Mat x = pauli_x(), z = pauli_z(), h = hadamard();
  for (int p = 0; p < n; ++p) {
    s.apply_controlled_1q({dat_reg, 2 * p + 1}, {dat_reg, 2 * p}, x);
    s.apply_1q({dat_reg, 2 * p + 1}, h);
    s.apply_controlled_1q({dat_reg, 2 * p}, {isr_reg, p}, x);
    s.apply_controlled_1q({dat_reg, 2 * p + 1}, {isr_reg, p}, z);
  }
  for (int q = 0; q < 2 * n; ++q) s.apply_1q({dat_reg, q}, h);
}

void ansatz_apply(QState& s, const std::string& ind_reg, const std::string& isr_reg,
                  const AnsatzParams& p, bool use_alpha, bool adjoint) {
  const int l = s.layout().reg(ind_reg).width;
  const int n = s.layout().reg(isr_reg).width;
  check_ansatz_params(p, n, l);
  const Eigen::VectorXd& v = use_alpha ? p.alpha : p.beta;
  for (const AnsatzGate& g : ansatz_gates(v, p.layers, n, l, adjoint)) {
    switch (g.kind) {
      case GateKind::kLadderCnot:
        s.apply_controlled_1q({isr_reg, g.a}, {isr_reg, g.b}, pauli_x());
        break;
      case GateKind::kRz:
        s.apply_1q({isr_reg, g.b}, rz_gate(g.angle));
        break;
      case GateKind::kRy:
        s.apply_1q({isr_reg, g.b}, ry_gate(g.angle));
        break;
      case GateKind::kCrz:
        s.apply_controlled_1q({ind_reg, g.a}, {isr_reg, g.b}, rz_gate(g.angle));
        break;
      case GateKind::kCry:
        s.apply_controlled_1q({ind_reg, g.a}, {isr_reg, g.b}, ry_gate(g.angle));
        break;
    }
  }
}

Mat ansatz_block(const AnsatzParams& p, bool use_alpha, int n, int l, long m) {
  check_ansatz_params(p, n, l);
  if (m < 0 || m >= (1L << l)) throw ShapeError("ansatz_block: block index out of range");
  const Eigen::VectorXd& v = use_alpha ? p.alpha : p.beta;
  const long dim = 1L << n;
  Mat u = Mat::Identity(dim, dim);
  for (const AnsatzGate& g : ansatz_gates(v, p.layers, n, l, false)) {
    switch (g.kind) {
      case GateKind::kLadderCnot:
        u = embed_cnot(n, g.a, g.b) * u;
        break;
      case GateKind::kRz:
        u = embed1(n, g.b, rz_gate(g.angle)) * u;
        break;
      case GateKind::kRy:
        u = embed1(n, g.b, ry_gate(g.angle)) * u;
        break;
      case GateKind::kCrz:
        if ((m >> (l - 1 - g.a)) & 1) u = embed_controlled(n, g.b, rz_gate(g.angle)) * u;
        break;
      case GateKind::kCry:
        if ((m >> (l - 1 - g.a)) & 1) u = embed_controlled(n, g.b, ry_gate(g.angle)) * u;
        break;
    }
  }
  return u;
}

QState variational_circuit(const Tensor3& t, const AnsatzParams& p, long i) {
  int n, l;
  tensor_widths(t, &n, &l);
  if (i < 0 || i >= (1L << n)) throw ShapeError("variational_circuit: input index out of range");
  QState s(variational_layout(n, l));
  const Vec flat = flatten_tensor(t);
  Vec full = Vec::Zero(flat.size() << n);
  for (long f = 0; f < flat.size(); ++f) full((f << n) | i) = flat(f);
  s.set_state_on({"ind", "dat", "isr"}, full);
  s.qft("ind", true);
  ansatz_apply(s, "ind", "isr", p, false, false);
  block_encode_apply(s, "dat", "isr");
  ansatz_apply(s, "ind", "isr", p, true, true);
  return s;
}

double objective(const Tensor3& t, const AnsatzParams& p, int T) {
  int n, l;
  tensor_widths(t, &n, &l);
  if (T < 1 || T > t.rows()) throw ContractError("objective: T must be in [1, rows]");
  double total = 0.0;
  for (long i = 0; i < T; ++i) {
    QState s = variational_circuit(t, p, i);
    for (long m = 0; m < t.depth(); ++m) total += circuit_probability(s, m, i);
  }
  return total;
}

double sigma_from_probability(const QState& s, long m, long i, double fro_norm) {
  const int n = s.layout().reg("isr").width;
  return std::sqrt(circuit_probability(s, m, i) * fro_norm * fro_norm * std::ldexp(1.0, n));
}

Tensor3 variational_reconstruct(const Tensor3& t, const AnsatzParams& p, int T,
                                bool magnitude_only, Eigen::MatrixXd* sigma_out,
                                Mat* diag_out) {
  int n, l;
  tensor_widths(t, &n, &l);
  if (T < 1 || T > t.rows()) throw ContractError("variational_reconstruct: T must be in [1, rows]");
  const long N = t.rows(), L = t.depth();
  const double fro = t.frob_norm();
  const double scale = fro * std::sqrt(std::ldexp(1.0, n));
  Eigen::MatrixXd sig(N, L);
  Mat diag(N, L);
  for (long i = 0; i < N; ++i) {
    QState s = variational_circuit(t, p, i);
    for (long m = 0; m < L; ++m) {
      const Cplx a = s.amplitude({{"ind", m}, {"dat", 0}, {"isr", i}});
      diag(i, m) = a * scale;
      sig(i, m) = std::abs(diag(i, m));
    }
  }
  Tensor3 hat(N, N, L);
  for (long m = 0; m < L; ++m) {
    Mat d = Mat::Zero(N, N);
    for (long i = 0; i < T; ++i) d(i, i) = magnitude_only ? Cplx(sig(i, m)) : diag(i, m);
    const Mat am = ansatz_block(p, true, n, l, m);
    const Mat bm = ansatz_block(p, false, n, l, m);
    hat.set_face(static_cast<int>(m), Mat(am * d * bm.adjoint()));
  }
  if (sigma_out) *sigma_out = sig;
  if (diag_out) *diag_out = diag;
  return mode3_idft(hat);
}

VtsvdResult optimize(const Tensor3& t, const VariationalOptions& opt) {
  int n, l;
  tensor_widths(t, &n, &l);
  if (opt.T < 1 || opt.T > t.rows()) throw ContractError("optimize: T must be in [1, rows]");
  if (opt.iters < 1) throw ContractError("optimize: iteration budget must be positive");
  if (!(opt.lr > 0.0)) throw ContractError("optimize: learning rate must be positive");

  const long npar = ansatz_param_count(opt.layers, n, l);
  AnsatzParams p;
  p.layers = opt.layers;
  p.alpha.resize(npar);
  p.beta.resize(npar);
  SplitMix64 rng(opt.seed);
  for (long j = 0; j < npar; ++j) p.alpha(j) = kPi * (1.0 - 2.0 * rng.next_unit());
  for (long j = 0; j < npar; ++j) p.beta(j) = kPi * (1.0 - 2.0 * rng.next_unit());

  VtsvdResult out;
  out.T = opt.T;
  out.objective = -1.0;
  out.objective_trace.reserve(opt.iters + 1);

  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(2 * npar);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(2 * npar);
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  auto record = [&](double obj) {
    if (!std::isfinite(obj)) throw NumericalError("optimize: objective is not finite");
    out.objective_trace.push_back(obj);
    if (obj > out.objective) {
      out.objective = obj;
      out.params = p;
    }
  };
  for (int it = 0; it < opt.iters; ++it) {
    record(objective(t, p, opt.T));
    const Eigen::VectorXd g = gradient(t, p, opt.T, n, l);
    m1 = b1 * m1 + (1.0 - b1) * g;
    m2 = b2 * m2 + (1.0 - b2) * g.cwiseProduct(g);
    const double f1 = 1.0 - std::pow(b1, it + 1), f2 = 1.0 - std::pow(b2, it + 1);
    for (long j = 0; j < 2 * npar; ++j) {
      const double step = opt.lr * (m1(j) / f1) / (std::sqrt(m2(j) / f2) + eps);
      if (j < npar)
        p.alpha(j) += step;
      else
        p.beta(j - npar) += step;
    }
  }
  record(objective(t, p, opt.T));

  out.reconstructed = variational_reconstruct(t, out.params, opt.T, opt.magnitude_only,
                                              &out.sigma_prime, &out.diag_values);
  return out;
}

}  // namespace tsvd
