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

#include "tsvd/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "tsvd/fourier.hpp"

namespace tsvd {

RegisterLayout::RegisterLayout(std::initializer_list<std::pair<std::string, int>> regs) {
  for (const auto& [name, width] : regs) add(name, width);
}

void RegisterLayout::add(const std::string& name, int width) {
  if (name.empty()) throw ContractError("RegisterLayout: empty register name");
  if (width < 0) throw ContractError("RegisterLayout: negative width for register " + name);
  if (has(name)) throw ContractError("RegisterLayout: duplicate register " + name);
  regs_.push_back({name, width, total_});
  total_ += width;
}

bool RegisterLayout::has(const std::string& name) const {
  for (const auto& r : regs_)
    if (r.name == name) return true;
  return false;
}

const Register& RegisterLayout::reg(const std::string& name) const {
  for (const auto& r : regs_)
    if (r.name == name) return r;
  throw ContractError("RegisterLayout: unknown register " + name);
}

long RegisterLayout::reg_value(long basis, const Register& r) const {
  if (r.width == 0) return 0;
  return (basis >> (total_ - r.offset - r.width)) & ((1L << r.width) - 1);
}

int QState::max_qubits() {
  if (const char* env = std::getenv("TSVD_MAX_QUBITS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 26;
}

QState::QState(RegisterLayout layout) : layout_(std::move(layout)) {
  if (layout_.total_qubits() > max_qubits())
    throw BudgetError("QState: " + std::to_string(layout_.total_qubits()) +
                      " qubits exceed the budget of " + std::to_string(max_qubits()) +
                      " (set TSVD_MAX_QUBITS to raise it)");
  amps_.assign(layout_.dim(), Cplx(0.0, 0.0));
  amps_[0] = Cplx(1.0, 0.0);
}

double QState::norm_sq() const {
  double s = 0.0;
  for (const Cplx& a : amps_) s += std::norm(a);
  return s;
}

long QState::basis_index(const std::vector<std::pair<std::string, long>>& assignment) const {
  long idx = 0;
  for (const auto& [name, value] : assignment) {
    const Register& r = layout_.reg(name);
    if (value < 0 || value >= (1L << r.width))
      throw std::out_of_range("QState: value " + std::to_string(value) + " out of range for register " +
                              name + " of width " + std::to_string(r.width));
    idx |= value << (layout_.total_qubits() - r.offset - r.width);
  }
  return idx;
}

Cplx QState::amplitude(const std::vector<std::pair<std::string, long>>& assignment) const {
  return amps_[basis_index(assignment)];
}

void QState::set_basis_state(const std::vector<std::pair<std::string, long>>& assignment) {
  long idx = basis_index(assignment);
  std::fill(amps_.begin(), amps_.end(), Cplx(0.0, 0.0));
  amps_[idx] = Cplx(1.0, 0.0);
}

void QState::set_state_on(const std::vector<std::string>& regs, const Vec& amps) {
  std::vector<int> shifts = target_shifts(regs, amps.size());
  if (std::abs(amps.norm() - 1.0) > 1e-8)
    throw ContractError("QState::set_state_on: amplitudes are not normalized");
  std::fill(amps_.begin(), amps_.end(), Cplx(0.0, 0.0));
  const int nt = static_cast<int>(shifts.size());
  for (long v = 0; v < amps.size(); ++v) {
    long idx = 0;
    for (int b = 0; b < nt; ++b) idx |= ((v >> (nt - 1 - b)) & 1L) << shifts[b];
    amps_[idx] = amps(v);
  }
}

std::vector<int> QState::target_shifts(const std::vector<std::string>& regs, long expected_dim) const {
  std::vector<int> shifts;
  int n = layout_.total_qubits();
  for (const auto& name : regs) {
    const Register& r = layout_.reg(name);
    for (int q = 0; q < r.width; ++q) shifts.push_back(n - 1 - (r.offset + q));
  }
  std::vector<int> sorted = shifts;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) throw ContractError("QState: register listed twice in target list");
  if (expected_dim >= 0 && (1L << shifts.size()) != expected_dim)
    throw ShapeError("QState: matrix dimension " + std::to_string(expected_dim) +
                     " does not match " + std::to_string(shifts.size()) + " target qubits");
  return shifts;
}

namespace {

bool check_unitary(const Mat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  // Full product check up to 1024; a seeded isometry probe beyond that, where
  // the full check would cost more than the application itself.
  if (u.rows() <= 1024) {
    Mat g = u.adjoint() * u;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff() <= tol;
  }
  SplitMix64 rng(0x5eed);
  for (int probe = 0; probe < 4; ++probe) {
    Vec x(u.rows());
    for (long i = 0; i < x.size(); ++i) x(i) = Cplx(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
    x.normalize();
    if (std::abs((u * x).norm() - 1.0) > tol) return false;
  }
  return true;
}

// Inserts a zero bit at each listed shift position (positions sorted
// ascending), spreading the counter over the non-target bits.
long expand_counter(long c, const std::vector<int>& sorted_shifts) {
  long idx = c;
  for (int s : sorted_shifts) {
    long low = idx & ((1L << s) - 1);
    idx = ((idx >> s) << (s + 1)) | low;
  }
  return idx;
}

}  // namespace

void QState::apply_on_shifts(const std::vector<int>& shifts, const Mat& u,
                             const std::vector<int>& control_shifts) {
  const int k = static_cast<int>(shifts.size());
  const long ud = 1L << k;
  const int n = layout_.total_qubits();

  // Offsets within the state for each matrix row/column index.
  std::vector<long> place(ud);
  for (long x = 0; x < ud; ++x) {
    long p = 0;
    for (int t = 0; t < k; ++t)
      if ((x >> (k - 1 - t)) & 1L) p |= 1L << shifts[t];
    place[x] = p;
  }

  std::vector<int> fixed = shifts;
  fixed.insert(fixed.end(), control_shifts.begin(), control_shifts.end());
  std::sort(fixed.begin(), fixed.end());
  long cmask = 0;
  for (int s : control_shifts) cmask |= 1L << s;

  const long groups = 1L << (n - static_cast<int>(fixed.size()));

  if (ud <= 8) {
    Cplx buf[8], out[8];
    for (long c = 0; c < groups; ++c) {
      long base = expand_counter(c, fixed) | cmask;
      for (long x = 0; x < ud; ++x) buf[x] = amps_[base | place[x]];
      for (long r = 0; r < ud; ++r) {
        Cplx acc(0.0, 0.0);
        for (long x = 0; x < ud; ++x) acc += u(r, x) * buf[x];
        out[r] = acc;
      }
      for (long x = 0; x < ud; ++x) amps_[base | place[x]] = out[x];
    }
    return;
  }

  // Batched gather -> GEMM -> scatter.
  const long block = std::max<long>(1, std::min<long>(groups, (1L << 22) / ud));
  Mat gather(ud, block), product(ud, block);
  for (long c0 = 0; c0 < groups; c0 += block) {
    long bs = std::min(block, groups - c0);
    for (long b = 0; b < bs; ++b) {
      long base = expand_counter(c0 + b, fixed) | cmask;
      for (long x = 0; x < ud; ++x) gather(x, b) = amps_[base | place[x]];
    }
    product.leftCols(bs).noalias() = u * gather.leftCols(bs);
    for (long b = 0; b < bs; ++b) {
      long base = expand_counter(c0 + b, fixed) | cmask;
      for (long x = 0; x < ud; ++x) amps_[base | place[x]] = product(x, b);
    }
  }
}

void QState::apply_unitary(const std::vector<std::string>& regs, const Mat& u) {
  std::vector<int> shifts = target_shifts(regs, u.rows());
  if (!check_unitary(u, 1e-8)) throw ContractError("QState::apply_unitary: matrix is not unitary");
  if (shifts.empty()) return;  // 1x1 unitary on zero-width registers: a global phase of modulus 1
  apply_on_shifts(shifts, u, {});
}

void QState::apply_controlled(const QubitRef& control, const std::vector<std::string>& regs,
                              const Mat& u) {
  std::vector<int> shifts = target_shifts(regs, u.rows());
  int cshift = qubit_shift(control);
  for (int s : shifts)
    if (s == cshift) throw ContractError("QState: control qubit overlaps target registers");
  if (!check_unitary(u, 1e-8)) throw ContractError("QState::apply_controlled: matrix is not unitary");
  if (shifts.empty()) return;
  apply_on_shifts(shifts, u, {cshift});
}

int QState::qubit_shift(const QubitRef& q) const {
  const Register& r = layout_.reg(q.reg);
  if (q.bit < 0 || q.bit >= r.width)
    throw std::out_of_range("QState: qubit bit out of range for register " + q.reg);
  return layout_.total_qubits() - 1 - (r.offset + q.bit);
}

void QState::apply_1q(const QubitRef& target, const Mat& u) {
  if (u.rows() != 2 || u.cols() != 2) throw ShapeError("QState::apply_1q: matrix is not 2x2");
  if (!check_unitary(u, 1e-8)) throw ContractError("QState::apply_1q: matrix is not unitary");
  apply_on_shifts({qubit_shift(target)}, u, {});
}

void QState::apply_controlled_1q(const QubitRef& control, const QubitRef& target, const Mat& u) {
  if (u.rows() != 2 || u.cols() != 2)
    throw ShapeError("QState::apply_controlled_1q: matrix is not 2x2");
  if (!check_unitary(u, 1e-8))
    throw ContractError("QState::apply_controlled_1q: matrix is not unitary");
  int cs = qubit_shift(control), ts = qubit_shift(target);
  if (cs == ts) throw ContractError("QState: control qubit overlaps target qubit");
  apply_on_shifts({ts}, u, {cs});
}

void QState::controlled_power(const QubitRef& control, const Mat& w, long power,
                              const std::vector<std::string>& regs) {
  if (power < 0) throw ContractError("QState::controlled_power: negative power");
  if (!check_unitary(w, 1e-8)) throw ContractError("QState::controlled_power: matrix is not unitary");
  if (power == 0) return;
  Mat acc = Mat::Identity(w.rows(), w.cols());
  Mat sq = w;
  long p = power;
  while (p > 0) {
    if (p & 1L) acc = sq * acc;
    p >>= 1;
    if (p > 0) sq = sq * sq;
  }
  apply_controlled(control, regs, acc);
}

void QState::hadamard_all(const std::string& reg) {
  const Register& r = layout_.reg(reg);
  Mat h(2, 2);
  double is2 = 1.0 / std::sqrt(2.0);
  h << is2, is2, is2, -is2;
  int n = layout_.total_qubits();
  for (int q = 0; q < r.width; ++q) apply_on_shifts({n - 1 - (r.offset + q)}, h, {});
}

void QState::qft(const std::string& reg, bool inverse) {
  const Register& r = layout_.reg(reg);
  if (r.width == 0) return;
  if (r.width > 12) throw BudgetError("QState::qft: dense transform capped at 12 qubits");
  Mat f = fourier_matrix(1L << r.width);
  if (inverse) f.adjointInPlace();
  apply_on_shifts(target_shifts({reg}, f.rows()), f, {});
}

void QState::reflection_about_zero(const std::vector<std::string>& regs) {
  std::vector<int> shifts = target_shifts(regs, -1);
  long mask = 0;
  for (int s : shifts) mask |= 1L << s;
  for (long b = 0; b < dim(); ++b)
    if ((b & mask) != 0) amps_[b] = -amps_[b];
}

void QState::permute_basis(const std::vector<std::string>& regs, const std::function<long(long)>& f) {
  std::vector<int> shifts = target_shifts(regs, -1);
  const int k = static_cast<int>(shifts.size());
  const long ud = 1L << k;

  std::vector<long> perm(ud);
  std::vector<char> seen(ud, 0);
  for (long v = 0; v < ud; ++v) {
    long w = f(v);
    if (w < 0 || w >= ud || seen[w])
      throw ContractError("QState::permute_basis: mapping is not a bijection on the register span");
    seen[w] = 1;
    perm[v] = w;
  }

  std::vector<long> place(ud);
  for (long x = 0; x < ud; ++x) {
    long p = 0;
    for (int t = 0; t < k; ++t)
      if ((x >> (k - 1 - t)) & 1L) p |= 1L << shifts[t];
    place[x] = p;
  }

  std::vector<int> sorted = shifts;
  std::sort(sorted.begin(), sorted.end());
  const long groups = 1L << (layout_.total_qubits() - k);
  std::vector<Cplx> buf(ud);
  for (long c = 0; c < groups; ++c) {
    long base = expand_counter(c, sorted);
    for (long v = 0; v < ud; ++v) buf[v] = amps_[base | place[v]];
    for (long v = 0; v < ud; ++v) amps_[base | place[perm[v]]] = buf[v];
  }
}

double QState::postselect(const std::string& reg, long value) {
  const Register& r = layout_.reg(reg);
  if (value < 0 || value >= (1L << r.width))
    throw std::out_of_range("QState::postselect: value out of range for register " + reg);
  double prob = 0.0;
  for (long b = 0; b < dim(); ++b)
    if (layout_.reg_value(b, r) == value) prob += std::norm(amps_[b]);
  if (prob <= 0.0)
    throw PostselectError("QState::postselect: branch " + reg + "=" + std::to_string(value) +
                          " has zero probability");
  double scale = 1.0 / std::sqrt(prob);
  for (long b = 0; b < dim(); ++b)
    amps_[b] = (layout_.reg_value(b, r) == value) ? amps_[b] * scale : Cplx(0.0, 0.0);
  return prob;
}

std::vector<double> QState::probabilities(const std::vector<std::string>& regs) const {
  int width = 0;
  for (const auto& name : regs) width += layout_.reg(name).width;
  if (width > 28) throw BudgetError("QState::probabilities: joint register span too wide");
  std::vector<double> out(1L << width, 0.0);
  for (long b = 0; b < dim(); ++b) {
    long v = 0;
    for (const auto& name : regs) {
      const Register& r = layout_.reg(name);
      v = (v << r.width) | layout_.reg_value(b, r);
    }
    out[v] += std::norm(amps_[b]);
  }
  return out;
}

long QState::sample(const std::vector<std::string>& regs, SplitMix64& rng) const {
  std::vector<double> p = probabilities(regs);
  double u = rng.next_unit();
  double acc = 0.0;
  for (long v = 0; v < static_cast<long>(p.size()); ++v) {
    acc += p[v];
    if (u < acc) return v;
  }
  return static_cast<long>(p.size()) - 1;
}

}  // namespace tsvd
