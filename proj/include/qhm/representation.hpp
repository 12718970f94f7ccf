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

#include <optional>
#include <vector>

#include "json.hpp"
#include "qhm/element.hpp"
#include "qhm/state.hpp"

namespace qhm {

// The represented operator acts pointwise in the base point (x, y), so it is
// a field of banded matrices over base points; nothing larger is ever formed.

/// The block of the represented element at one base point:
///   entry(p, r) = a(x + hbar (p+r) mu, y + hbar (p+r) nu, p - r),
/// p, r in [-Q, Q], banded with |p - r| <= bandwidth.
struct FiberMatrix {
  double x = 0.0, y = 0.0;
  int Q = 0;
  int bandwidth = 0;
  std::vector<cplx> m;  // (2Q+1)^2 row-major

  int n() const { return 2 * Q + 1; }
  cplx at(int p, int r) const {
    return m[static_cast<std::size_t>(p + Q) * n() + (r + Q)];
  }
};

FiberMatrix fiber_matrix(const Element& a, double x, double y,
                         std::optional<int> Q = std::nullopt);

nlohmann::json fiber_matrix_to_json(const FiberMatrix& M);

/// A vector of the represented Hilbert space restricted to the band
/// |p| <= Q, sampled at the fundamental grid base points.
struct GridVector {
  ModelParams params;
  Truncation trunc;
  std::vector<cplx> v;  // [(p+Q)*Nx + ix]*Ny + iy

  std::size_t index(int p, int ix, int iy) const {
    return (static_cast<std::size_t>(p + trunc.Q) * trunc.Nx + ix) *
               trunc.Ny +
           iy;
  }
};

/// Applies the fiber matrix of `a` at every grid base point.
GridVector apply(const Element& a, const GridVector& xi);

struct CstarOptions {
  std::optional<int> Q;     // band override (default: the element's Q)
  int base_grid = 8;        // initial base-point grid, doubled until stable
  int max_base_grid = 64;
  double refine_tol = 1e-4;
  double pi_tol = 1e-10;
  long pi_max_iters = 10000;
  std::uint64_t seed = 42;  // power-iteration start vectors
};

struct CstarEstimate {
  double lower = 0.0;  // every fiber norm is a true lower bound
  double value = 0.0;  // equal to lower; kept separate in the report schema
  int base_grid = 0;
  long iterations = 0;
  bool used_svd_fallback = false;
};

/// Estimate of the operator norm of the represented element: max over base
/// points of the fiber-matrix spectral norm (power iteration on M*M, dense
/// SVD fallback for n <= 128). Grid-sup and band truncation make this a
/// certified lower bound.
CstarEstimate cstar_norm_estimate(const Element& a,
                                  const CstarOptions& opts = {});

/// Spectral norm of one fiber matrix; throws NumericalError when power
/// iteration stalls and the matrix is too large for the SVD fallback.
double spectral_norm(const FiberMatrix& M, const CstarOptions& opts = {},
                     bool* used_fallback = nullptr, long* iterations = nullptr);

/// State <apply(a, xi), xi> under the cell-measure inner product.
State vector_state(const ModelParams& params, const Truncation& trunc,
                   std::vector<cplx> xi);

}  // namespace qhm
