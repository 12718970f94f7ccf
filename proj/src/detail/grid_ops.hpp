// Copyright 2026-present the qhm project
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

// Shared fiber-level machinery: resampling plans, stencil cores. Internal to
// the library; the public surface is in include/qhm/.

#include <vector>

#include "qhm/element.hpp"

namespace qhm::detail {

/// Paired-difference coefficients of spectral differentiation on a uniform
/// periodic grid of N points over [0,1):
///   f'(j/N) = sum_{m=1..M} coef[m-1] * (f[j-m] - f[j+m]).
/// Written in paired form so constants differentiate to exactly zero.
struct DyTable {
  int N = 0;
  std::vector<double> coef;
};
const DyTable& dy_table(int N);

/// One row (length N) of spectral d/dy.
void apply_dy_row(const DyTable& t, const cplx* f, cplx* out);

/// d1 = -d/dx on one fiber: 4th-order centered differences with twist-folded
/// ghost rows. `fiber` and `out` are Nx x Ny row-major.
void apply_d1_fiber(const ModelParams& mp, const Truncation& t, int p,
                    const cplx* fiber, cplx* out);

/// d2 = 2 pi i c p x * f - df/dy on one fiber.
void apply_d2_fiber(const ModelParams& mp, const Truncation& t, int p,
                    const cplx* fiber, cplx* out);

/// d3 = 2 pi i p * f on one fiber.
void apply_d3_fiber(int p, const Truncation& t, const cplx* fiber, cplx* out);

/// out[ix*Ny + iy] = a.fold_evaluate(ix/Nx - dx, iy/Ny - dy, p) on the
/// fundamental grid. Matches fold_evaluate pointwise; the grid flavor shares
/// one set of interpolation weights across the whole fiber.
void resample_fiber(const Element& a, int p, double dx, double dy, cplx* out);

}  // namespace qhm::detail
