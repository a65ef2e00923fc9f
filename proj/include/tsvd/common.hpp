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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tsvd {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Shape / dimension mismatches (wrong tensor dims, register width vs matrix
// dimension, non-power-of-two axis where one is required).
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// An operation was handed arguments violating its documented contract
// (non-unitary matrix, non-normalized state, overlapping register lists, ...).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Input is degenerate for the requested computation (all-zero tensor, zero
// slice feeding a preparation routine, near-degenerate phase spectrum).
class DegenerateInputError : public std::runtime_error {
 public:
  explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

// Postselection on a branch of exactly zero probability.
class PostselectError : public std::runtime_error {
 public:
  explicit PostselectError(const std::string& what) : std::runtime_error(what) {}
};

// An iteration failed to converge, or a NaN/Inf appeared mid-computation.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// The requested simulation exceeds the qubit budget (see qsim::max_qubits).
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_pow2(long v) { return v > 0 && (v & (v - 1)) == 0; }

// Number of bits needed to index [0, v) for a power-of-two v; log2_exact(1) = 0.
inline int log2_exact(long v) {
  if (!is_pow2(v)) throw ShapeError("log2_exact: " + std::to_string(v) + " is not a power of two");
  int b = 0;
  while ((1L << b) < v) ++b;
  return b;
}

inline long next_pow2(long v) {
  long p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace tsvd
