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

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhm/model.hpp"

namespace qhm {

// An element of the truncated function space: a function on R x T x Z with
// support |p| <= P that obeys the twist relation
//
//   phi(x + k, y, p) = e(c*k*p*y) * phi(x, y, p)   for all integers k,
//
// so it is determined by its values on the fundamental domain [0,1) x [0,1).
// Two flavors: Grid holds samples on an Nx x Ny grid per fiber; ClosedForm
// holds an evaluation callback (and optionally analytic x/y partials), all
// defined for x in [0,1). Elements are immutable after construction and all
// operations on them are pure, so they can be shared freely across threads.
class Element {
 public:
  enum class Flavor { Grid, ClosedForm };
  using EvalFn = std::function<cplx(double x, double y, int p)>;

  static Element grid(const ModelParams& params, const Truncation& trunc,
                      std::vector<cplx> values);
  static Element closed_form(const ModelParams& params,
                             const Truncation& trunc, EvalFn value,
                             EvalFn dx = {}, EvalFn dy = {});

  const ModelParams& params() const { return params_; }
  const Truncation& trunc() const { return trunc_; }
  Flavor flavor() const { return flavor_; }
  bool is_grid() const { return flavor_ == Flavor::Grid; }
  bool has_partials() const;

  /// Set when a star product had to drop fibers beyond the output band.
  bool band_clamped() const { return band_clamped_; }
  void set_band_clamped(bool v) { band_clamped_ = v; }

  // --- grid storage access (Grid flavor) ---
  const std::vector<cplx>& values() const;
  std::span<const cplx> fiber(int p) const;
  std::span<cplx> fiber_mut(int p);
  std::size_t index(int p, int ix, int iy) const {
    return (static_cast<std::size_t>(p + trunc_.P) * trunc_.Nx + ix) *
               trunc_.Ny +
           iy;
  }

  /// Grid flavor: value at (x0, y0) in [0,1)^2 on fiber p. Trigonometric
  /// interpolation in y (the fiber is 1-periodic there), local cubic in x;
  /// stencil points outside the fundamental domain are borrowed from the
  /// opposite edge with the twist phase.
  cplx interpolate(double x0, double y0, int p) const;

  /// Evaluation anywhere on R x T x Z via the twist relation. Returns 0 for
  /// |p| > P. Throws std::domain_error on non-finite (x, y).
  cplx fold_evaluate(double x, double y, int p) const;

  /// Analytic partials of the twisted extension (ClosedForm with partials
  /// only; throws CapabilityError otherwise). The y-partial picks up the
  /// derivative of the twist phase.
  cplx fold_evaluate_dx(double x, double y, int p) const;
  cplx fold_evaluate_dy(double x, double y, int p) const;

  // fundamental-domain evaluation, dispatching on flavor
  cplx eval_fund(double x0, double y0, int p) const;
  cplx eval_fund_dx(double x0, double y0, int p) const;
  cplx eval_fund_dy(double x0, double y0, int p) const;

 private:
  Element() = default;
  ModelParams params_;
  Truncation trunc_;
  Flavor flavor_ = Flavor::Grid;
  bool band_clamped_ = false;
  std::vector<cplx> values_;  // [(p+P)*Nx + ix]*Ny + iy
  EvalFn value_, dx_, dy_;
};

/// The multiplicative identity: delta_{p,0} as a closed form (with zero
/// partials).
Element identity_element(const ModelParams& params, const Truncation& trunc);

/// Sample any element onto the grid of `trunc` (values at (ix/Nx, iy/Ny)).
Element sample(const Element& el, const Truncation& trunc);

/// Smooth window on [0,1]: sin^order(pi * (x-delta)/(1-2 delta)) inside the
/// support [delta, 1-delta], 0 outside. Vanishes to high order at the seam so
/// windowed fibers extend smoothly across x in Z.
struct WindowSpec {
  double delta = 0.1;
  int order = 8;
};
double window_value(double x, const WindowSpec& w);
double window_deriv(double x, const WindowSpec& w);

/// Closed-form element w(x) * sum_{m,n} coeff[p][m][n] e(m x + n y) per fiber
/// (no window on the p = 0 fiber, which is genuinely periodic in x). Carries
/// analytic partials. coeffs indexed [(p+P)*(2Mx+1) + (m+Mx)]*(2My+1) + n+My.
Element windowed_element(const ModelParams& params, const Truncation& trunc,
                         std::vector<cplx> coeffs, int Mx, int My,
                         const WindowSpec& w = {});

/// Windowed element with pseudo-random coefficients damped by
/// exp(-decay * (m^2 + n^2 + p^2)). Deterministic for a fixed seed.
Element random_element(std::uint64_t seed, const Truncation& trunc,
                       const ModelParams& params, double decay);

/// (el + el*)/2. The result satisfies result* == result exactly.
Element selfadjoint_part(const Element& el);

// --- serialization (Grid flavor; round-trips bit-exactly) ---
nlohmann::json element_to_json(const Element& el);
Element element_from_json(const nlohmann::json& j);
void save_element(const std::string& path, const Element& el);
Element load_element(const std::string& path);

namespace detail {
/// Barycentric weights of trigonometric interpolation at y0 for data on the
/// uniform grid j/N, j = 0..N-1. Snaps to the node when y0 is one.
void trig_weights(int N, double y0, double* w);
/// Cubic Lagrange weights at fractional offset u in [0,1) for stencil
/// offsets {-1, 0, 1, 2}.
void cubic_weights(double u, double* wx);

/// Deterministic uniform/gaussian draws; fully specified bit behavior so
/// pinned regression values are portable across standard libraries.
struct Draws {
  explicit Draws(std::uint64_t seed) : g(seed) {}
  std::mt19937_64 g;
  double uniform() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
  cplx gauss_c() {
    const double u = 1.0 - uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double th = 2.0 * std::numbers::pi * uniform();
    return cplx(r * std::cos(th), r * std::sin(th));
  }
};
}  // namespace detail

}  // namespace qhm
