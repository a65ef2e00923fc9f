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

#include "tsvd/common.hpp"
#include "tsvd/qsim.hpp"
#include "tsvd/tensor.hpp"

namespace tsvd {

// Parameter sets for the block-diagonal ansatz pair.  Each vector holds
// layers * (2n + 2*l*n) angles in radians, where n is the data register width
// and l the block-index register width.
struct AnsatzParams {
  int layers = 1;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
};

long ansatz_param_count(int layers, int n, int l);

struct VariationalOptions {
  int T = 1;
  int layers = 1;
  int iters = 500;
  double lr = 0.05;
  std::uint64_t seed = 0;
  bool magnitude_only = false;
};

struct VtsvdResult {
  AnsatzParams params;                  // best parameters found
  double objective = 0.0;               // objective at `params`
  std::vector<double> objective_trace;  // raw value at every iterate
  Eigen::MatrixXd sigma_prime;          // sigma_prime(i, m) >= 0
  Mat diag_values;                      // complex diagonal values d_i^(m)
  Tensor3 reconstructed;
  int T = 1;

  VtsvdResult() : reconstructed(1, 1, 1) {}
};

// Registers: "ind" (l qubits, face index), "dat" (2n qubits, flattened face
// amplitudes), "isr" (n qubits, the vector the encoded matrix acts on).
RegisterLayout variational_layout(int n, int l);

// Pairwise block encoding.  dat must hold a Z-order flattened matrix A/|A|_F;
// after the call, the dat = |0> branch carries A psi / (|A|_F sqrt(2^n)) on
// isr.  dat width must be exactly twice the isr width.
void block_encode_apply(QState& s, const std::string& dat_reg, const std::string& isr_reg);

// One ansatz circuit W on (ind, isr): per layer a CNOT ladder down isr, RZ
// then RY singles on each isr qubit, then controlled-RZ and controlled-RY
// from every ind qubit to every isr qubit.  Parameter order per layer: RZ
// singles (ascending isr), RY singles, CRZ block (ind-major ascending), CRY
// block.  ind only ever controls, so W is block-diagonal over ind values.
void ansatz_apply(QState& s, const std::string& ind_reg, const std::string& isr_reg,
                  const AnsatzParams& p, bool use_alpha, bool adjoint);

// Dense 2^n x 2^n matrix of the ansatz block <m|W|m>.
Mat ansatz_block(const AnsatzParams& p, bool use_alpha, int n, int l, long m);

// State after the five circuit steps for input index i: load |i> and the
// flattened tensor, inverse QFT on ind, W(beta), block encoding, W(alpha)
// adjoint.  The amplitude at (ind=m, dat=0, isr=i) times |A|_F sqrt(2^n) is
// the diagonal value d_i^(m).
QState variational_circuit(const Tensor3& t, const AnsatzParams& p, long i);

// Sum over i < T and all m of Pr(ind=m, dat=0, isr=i); maximum 2^-n.
double objective(const Tensor3& t, const AnsatzParams& p, int T);

// sigma'_i^(m) = sqrt(Pr(ind=m, dat=0, isr=i) * fro_norm^2 * 2^n).
double sigma_from_probability(const QState& s, long m, long i, double fro_norm);

// Rank-T reconstruction A_m diag(d) B_m^dagger per face, inverse-transformed
// back to the spatial domain.  With magnitude_only the diagonal uses the
// nonnegative sigma' magnitudes instead of the complex diagonal values.
// Optionally returns the full sigma_prime / diag_values matrices.
Tensor3 variational_reconstruct(const Tensor3& t, const AnsatzParams& p, int T,
                                bool magnitude_only, Eigen::MatrixXd* sigma_out = nullptr,
                                Mat* diag_out = nullptr);

// Adam ascent with parameter-shift gradients from a seeded uniform(-pi, pi]
// start; returns the best-objective parameters with artifacts evaluated there.
VtsvdResult optimize(const Tensor3& t, const VariationalOptions& opt);

}  // namespace tsvd
