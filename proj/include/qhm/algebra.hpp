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
#include <utility>
#include <vector>

#include "qhm/element.hpp"

namespace qhm {

/// The deformed product
///   (a*b)(x,y,p) = sum_q a(x - hbar(q-p)mu, y - hbar(q-p)nu, q)
///                        b(x - hbar q mu,   y - hbar q nu,  p-q).
/// The result band is P_a + P_b; if `max_band` is smaller the band is clamped
/// and the result carries band_clamped(). Closed-form inputs produce a
/// closed-form result (exact sums, analytic partials when both factors carry
/// them); otherwise the product is resampled on the fundamental grid.
Element star(const Element& a, const Element& b,
             std::optional<int> max_band = std::nullopt);

/// a*(x,y,p) = conj(a(x,y,-p)); an involution of the algebra.
Element involution(const Element& a);

/// tau(a) = integral of the p = 0 fiber over the fundamental domain,
/// computed with the uniform product rule on the Nx x Ny grid.
cplx trace(const Element& a);

/// (L_g a)(x,y,p) = e(p(t + c s (x - r))) a(x-r, y-s, p). Grid elements are
/// resampled on the fundamental grid.
Element group_action(const GroupPoint& g, const Element& a);

/// Composition law making L a left action: L_g(L_h(a)) = L_{compose(g,h)}(a).
/// Verified against the action identity; the cocycle sits in the central
/// coordinate: t'' = t + t' + c * s * r'.
GroupPoint compose(const ModelParams& params, const GroupPoint& g,
                   const GroupPoint& h);

struct NormOptions {
  bool polish = true;    // golden-section refinement around the grid argmax
  int polish_rounds = 2; // coordinate passes per fiber
};

/// Per-fiber sups and their sum. The sup over R x T reduces to the
/// fundamental domain because the twist phase is unimodular; the grid max is
/// a certified-from-below estimate, optionally polished.
struct NormReport {
  double sup_sum = 0.0;
  int pmin = 0;
  std::vector<double> per_p_sups;
  std::vector<std::pair<double, double>> grid_argmax;  // (x, y) per fiber

  double per_p(int p) const { return per_p_sups.at(p - pmin); }
};

NormReport sup_sum_norm(const Element& a, const NormOptions& opts = {});

// The three derivations:
//   d1(a) = -da/dx
//   d2(a) = 2 pi i c p x a - da/dy
//   d3(a) = 2 pi i p a
// Grid flavor uses 4th-order centered differences in x (twist-folded ghost
// rows at the domain edges) and spectral differentiation in y. Closed forms
// need analytic partials for d1 and d2 (CapabilityError otherwise).
Element derivation_1(const Element& a);
Element derivation_2(const Element& a);
Element derivation_3(const Element& a);

struct LipReport {
  double value = 0.0;
  NormReport d1, d2, d3;
};

/// L(a) = max_i ||d_i(a)||. Warns (stderr) when `a` is not self-adjoint but
/// computes anyway.
LipReport lip_report(const Element& a, const NormOptions& opts = {});
double lip_seminorm(const Element& a, const NormOptions& opts = {});

/// Keeps only the p = 0 fiber; equals the average of the central one
/// parameter action subgroup, which the averaging tests verify.
Element zero_mode(const Element& a);

/// Averages group_action((r,s,0), a0) over a uniform (r,s) grid and returns
/// the constant the averaged element collapses to; equals trace(a0).
/// Precondition: a0 supported at p = 0 (ConfigError otherwise).
cplx average_over_torus(const Element& a0);

/// Max deviation from self-adjointness, |a - a*| sampled on the grid (grid
/// flavor) or at probe points (closed form).
double selfadjoint_deviation(const Element& a);

/// factor * a (same flavor).
Element scale(const Element& a, cplx factor);

/// alpha * a + beta * b; the result band is max(P_a, P_b).
Element lincomb(cplx alpha, const Element& a, cplx beta, const Element& b);

}  // namespace qhm
