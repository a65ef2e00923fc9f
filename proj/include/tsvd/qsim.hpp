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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tsvd/common.hpp"
#include "tsvd/rng.hpp"

namespace tsvd {

// A named block of qubits inside a state.  offset counts qubits from the most
// significant end of the global basis index; width 0 registers are legal and
// behave as one-dimensional (value always 0).
struct Register {
  std::string name;
  int width = 0;
  int offset = 0;
};

// Ordered, contiguous register map.  Qubit order is register-major with the
// most significant bit first inside each register: the first register added
// owns the most significant bits of the basis index.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  RegisterLayout(std::initializer_list<std::pair<std::string, int>> regs);

  void add(const std::string& name, int width);
  bool has(const std::string& name) const;
  const Register& reg(const std::string& name) const;
  const std::vector<Register>& regs() const { return regs_; }

  int total_qubits() const { return total_; }
  long dim() const { return 1L << total_; }

  // Value of a register inside a basis index.
  long reg_value(long basis, const Register& r) const;
  long reg_value(long basis, const std::string& name) const { return reg_value(basis, reg(name)); }

 private:
  std::vector<Register> regs_;
  int total_ = 0;
};

// One qubit inside a named register; bit 0 is the register's most significant
// qubit.
struct QubitRef {
  std::string reg;
  int bit = 0;
};

// Reads an unsigned register value as two's complement.
inline long signed_value(long x, int width) {
  if (width == 0) return 0;
  return (x >= (1L << (width - 1))) ? x - (1L << width) : x;
}

// Dense statevector over a RegisterLayout.  Construction enforces the global
// qubit budget (default 26, overridable via the TSVD_MAX_QUBITS environment
// variable).  All operations are deterministic: fixed iteration order, no
// threading inside a single state.
class QState {
 public:
  explicit QState(RegisterLayout layout);

  static int max_qubits();

  const RegisterLayout& layout() const { return layout_; }
  int num_qubits() const { return layout_.total_qubits(); }
  long dim() const { return layout_.dim(); }

  std::vector<Cplx>& amps() { return amps_; }
  const std::vector<Cplx>& amps() const { return amps_; }
  double norm_sq() const;

  // Basis index assembled from register assignments; registers not listed are
  // taken as 0.  Throws ContractError on unknown names, std::out_of_range on
  // values outside a register's range.
  long basis_index(const std::vector<std::pair<std::string, long>>& assignment) const;
  Cplx amplitude(const std::vector<std::pair<std::string, long>>& assignment) const;

  // Sets the state to the basis vector described by the assignment.
  void set_basis_state(const std::vector<std::pair<std::string, long>>& assignment);

  // Sets the state to `amps` on the joint value of the listed registers (first
  // register most significant) with every unlisted register at |0>.  The
  // vector must have the joint dimension and unit norm within 1e-8.
  void set_state_on(const std::vector<std::string>& regs, const Vec& amps);

  // Applies a dense unitary to the listed registers.  The matrix is indexed by
  // the concatenation of the listed register values, first register most
  // significant.  Registers may be listed in any order but at most once;
  // non-unitary matrices (1e-8 tolerance) are rejected.
  void apply_unitary(const std::vector<std::string>& regs, const Mat& u);

  // Same, restricted to the branch where `control` is |1>.
  void apply_controlled(const QubitRef& control, const std::vector<std::string>& regs, const Mat& u);

  // Applies a 2x2 unitary to a single qubit.
  void apply_1q(const QubitRef& target, const Mat& u);

  // Same, restricted to the branch where `control` is |1>.
  void apply_controlled_1q(const QubitRef& control, const QubitRef& target, const Mat& u);

  // Applies w^power (dense repeated squaring) controlled on one qubit.
  void controlled_power(const QubitRef& control, const Mat& w, long power,
                        const std::vector<std::string>& regs);

  void hadamard_all(const std::string& reg);

  // Quantum Fourier transform on a register (dense matrix from fourier_matrix,
  // MSB-first register value convention; register width capped at 12).
  void qft(const std::string& reg, bool inverse = false);

  // Flips the sign of every amplitude whose listed registers are not all |0>.
  void reflection_about_zero(const std::vector<std::string>& regs);

  // Applies a classical bijection f on the joint value of the listed registers
  // as a basis permutation.  f must be a bijection on [0, 2^width); checked.
  void permute_basis(const std::vector<std::string>& regs, const std::function<long(long)>& f);

  // Projects `reg` onto `value` and renormalizes; returns the probability of
  // the branch.  Throws PostselectError if the branch has zero probability.
  double postselect(const std::string& reg, long value);

  // Marginal distribution over the joint value of the listed registers.
  std::vector<double> probabilities(const std::vector<std::string>& regs) const;

  // One Born-rule sample of the joint value of the listed registers.
  long sample(const std::vector<std::string>& regs, SplitMix64& rng) const;

 private:
  // Global bit shifts (from the least significant end) for a register list,
  // most significant target first.
  std::vector<int> target_shifts(const std::vector<std::string>& regs, long expected_dim) const;
  int qubit_shift(const QubitRef& q) const;
  void apply_on_shifts(const std::vector<int>& shifts, const Mat& u, const std::vector<int>& control_shifts);

  RegisterLayout layout_;
  std::vector<Cplx> amps_;
};

}  // namespace tsvd
