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

#include "tsvd/common.hpp"

namespace tsvd {

// Unitary Fourier matrix with entries w^{xy} / sqrt(dim), w = exp(+2*pi*i/dim).
// This is the QFT acting on an integer register; the tube transform used by
// the classical oracle is its adjoint, so both sides share one constant.
inline Mat fourier_matrix(long dim) {
  if (dim < 1) throw ShapeError("fourier_matrix: dim must be >= 1");
  Mat f(dim, dim);
  double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (long x = 0; x < dim; ++x)
    for (long y = 0; y < dim; ++y) {
      double ang = 2.0 * kPi * static_cast<double>(x) * static_cast<double>(y) / static_cast<double>(dim);
      f(x, y) = s * Cplx(std::cos(ang), std::sin(ang));
    }
  return f;
}

}  // namespace tsvd
