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

#include "qhm/representation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "detail/parallel.hpp"
#include "qhm/errors.hpp"
#include "qhm/kernels.hpp"

namespace qhm {

FiberMatrix fiber_matrix(const Element& a, double x, double y,
                         std::optional<int> Qopt) {
  const int Q = Qopt.value_or(a.trunc().Q);
  if (Q < 0) throw ConfigError("fiber_matrix: negative band");
  const int P = a.trunc().P;
  const ModelParams& mp = a.params();
  FiberMatrix M;
  M.x = x;
  M.y = y;
  M.Q = Q;
  M.bandwidth = P;
  const int n = 2 * Q + 1;
  M.m.assign(static_cast<std::size_t>(n) * n, cplx(0.0));
  // entries on one anti-diagonal p + r = s share their evaluation point
  for (int s = -2 * Q; s <= 2 * Q; ++s) {
    const double xs = x + mp.hbar * s * mp.mu;
    const double ys = y + mp.hbar * s * mp.nu;
    for (int d = -P; d <= P; ++d) {
      if ((s + d) % 2 != 0) continue;
      const int p = (s + d) / 2, r = (s - d) / 2;
      if (std::abs(p) > Q || std::abs(r) > Q) continue;
      M.m[static_cast<std::size_t>(p + Q) * n + (r + Q)] =
          a.fold_evaluate(xs, ys, d);
    }
  }
  return M;
}

nlohmann::json fiber_matrix_to_json(const FiberMatrix& M) {
  nlohmann::json j;
  j["x"] = M.x;
  j["y"] = M.y;
  j["Q"] = M.Q;
  j["bandwidth"] = M.bandwidth;
  nlohmann::json rows = nlohmann::json::array();
  const int n = M.n();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < n; ++k) {
      const cplx v = M.m[static_cast<std::size_t>(i) * n + k];
      row.push_back(nlohmann::json::array({v.real(), v.imag()}));
    }
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

GridVector apply(const Element& a, const GridVector& xi) {
  const Truncation& t = xi.trunc;
  if (!same_params(a.params(), xi.params))
    throw ConfigError("apply: model parameters differ");
  if (!same_grid(a.trunc(), t))
    throw ConfigError("apply: grid sizes differ");
  const std::size_t expected =
      static_cast<std::size_t>(2 * t.Q + 1) * t.Nx * t.Ny;
  if (xi.v.size() != expected)
    throw ConfigError("apply: vector size does not match its band");
  GridVector out;
  out.params = xi.params;
  out.trunc = t;
  out.v.assign(expected, cplx(0.0));
  const int n = 2 * t.Q + 1;
  const std::size_t plane = static_cast<std::size_t>(t.Nx) * t.Ny;
  std::vector<cplx> col(n), res(n);
  for (int ix = 0; ix < t.Nx; ++ix)
    for (int iy = 0; iy < t.Ny; ++iy) {
      const FiberMatrix M =
          fiber_matrix(a, static_cast<double>(ix) / t.Nx,
                       static_cast<double>(iy) / t.Ny, t.Q);
      const std::size_t off = static_cast<std::size_t>(ix) * t.Ny + iy;
      for (int k = 0; k < n; ++k)
        col[k] = xi.v[static_cast<std::size_t>(k) * plane + off];
      kernels::banded_cmatvec(M.m.data(), col.data(), res.data(), n,
                              std::min<std::size_t>(M.bandwidth, n - 1));
      for (int k = 0; k < n; ++k)
        out.v[static_cast<std::size_t>(k) * plane + off] = res[k];
    }
  return out;
}

double spectral_norm(const FiberMatrix& M, const CstarOptions& opts,
                     bool* used_fallback, long* iterations) {
  if (used_fallback) *used_fallback = false;
  if (iterations) *iterations = 0;
  const int n = M.n();
  const std::size_t band = std::min<std::size_t>(M.bandwidth, n - 1);
  std::vector<cplx> Mh(M.m.size());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      Mh[static_cast<std::size_t>(i) * n + k] =
          std::conj(M.m[static_cast<std::size_t>(k) * n + i]);

  std::uint64_t st = opts.seed;
  std::vector<cplx> v(n), w(n), u(n);
  for (int i = 0; i < n; ++i) {
    const double re =
        static_cast<double>(detail::splitmix64(st) >> 11) * 0x1.0p-53 - 0.5;
    const double im =
        static_cast<double>(detail::splitmix64(st) >> 11) * 0x1.0p-53 - 0.5;
    v[i] = cplx(re, im);
  }
  double nv = std::sqrt(kernels::cdotc(v.data(), v.data(), n).real());
  if (nv == 0.0) v[0] = 1.0, nv = 1.0;
  kernels::cscale(1.0 / nv, v.data(), n);

  double lambda = 0.0;
  int stable = 0;
  for (long it = 1; it <= opts.pi_max_iters; ++it) {
    kernels::banded_cmatvec(M.m.data(), v.data(), w.data(), n, band);
    kernels::banded_cmatvec(Mh.data(), w.data(), u.data(), n, band);
    const double next = kernels::cdotc(v.data(), u.data(), n).real();
    const double nu2 = std::sqrt(kernels::cdotc(u.data(), u.data(), n).real());
    if (iterations) *iterations = it;
    if (nu2 == 0.0) return 0.0;  // element annihilates the start vector
    kernels::clincomb(1.0 / nu2, u.data(), 0.0, u.data(), v.data(), n);
    if (std::abs(next - lambda) <= opts.pi_tol * std::max(1.0, next)) {
      if (++stable >= 3) return std::sqrt(std::max(next, 0.0));
    } else {
      stable = 0;
    }
    lambda = next;
  }
  if (n <= 128) {
    if (used_fallback) *used_fallback = true;
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        A(i, k) = M.m[static_cast<std::size_t>(i) * n + k];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(0);
  }
  throw NumericalError("spectral_norm: power iteration did not converge",
                       opts.pi_max_iters);
}

CstarEstimate cstar_norm_estimate(const Element& a, const CstarOptions& opts) {
  CstarOptions o = opts;
  if (!o.Q) o.Q = a.trunc().Q;
  CstarEstimate est;
  double prev = -1.0;
  for (int n = o.base_grid; n <= o.max_base_grid; n *= 2) {
    std::vector<double> norms(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<long> iters(norms.size(), 0);
    std::vector<char> fell(norms.size(), 0);
    detail::parallel_for(norms.size(), [&](std::size_t k) {
      const int i = static_cast<int>(k) / n, j = static_cast<int>(k) % n;
      CstarOptions local = o;
      local.seed = detail::mix_seed(o.seed, k);
      const FiberMatrix M =
          fiber_matrix(a, static_cast<double>(i) / n,
                       static_cast<double>(j) / n, *o.Q);
      bool fb = false;
      norms[k] = spectral_norm(M, local, &fb, &iters[k]);
      fell[k] = fb ? 1 : 0;
    });
    double mx = 0.0;
    for (double v : norms) mx = std::max(mx, v);
    for (long it : iters) est.iterations += it;
    for (char f : fell) est.used_svd_fallback = est.used_svd_fallback || f;
    est.value = std::max(est.value, mx);
    est.base_grid = n;
    if (prev >= 0.0 && std::abs(mx - prev) < o.refine_tol) break;
    prev = mx;
  }
  est.lower = est.value;
  return est;
}

State vector_state(const ModelParams& params, const Truncation& trunc,
                   std::vector<cplx> xi) {
  return State::vector_state(params, trunc, std::move(xi));
}

State State::trace_state(const ModelParams& params, const Truncation& trunc) {
  validate(params);
  validate(trunc);
  State s;
  s.kind_ = Kind::Trace;
  s.params_ = params;
  s.trunc_ = trunc;
  return s;
}

State State::vector_state(const ModelParams& params, const Truncation& trunc,
                          std::vector<cplx> xi) {
  validate(params);
  validate(trunc);
  const std::size_t expected =
      static_cast<std::size_t>(2 * trunc.Q + 1) * trunc.Nx * trunc.Ny;
  if (xi.size() != expected)
    throw ConfigError("vector_state: payload size does not match truncation");
  const double cell = 1.0 / (static_cast<double>(trunc.Nx) * trunc.Ny);
  const double nrm2 =
      kernels::cdotc(xi.data(), xi.data(), xi.size()).real() * cell;
  if (!(nrm2 > 0.0))
    throw std::domain_error("vector_state: zero vector");
  kernels::cscale(1.0 / std::sqrt(nrm2), xi.data(), xi.size());
  State s;
  s.kind_ = Kind::Vector;
  s.params_ = params;
  s.trunc_ = trunc;
  s.xi_ = std::move(xi);
  return s;
}

State localized_state(const ModelParams& params, const Truncation& trunc,
                      double x0, double y0, double width) {
  if (!(width > 0.0)) throw ConfigError("localized_state: width must be > 0");
  std::vector<cplx> xi(
      static_cast<std::size_t>(2 * trunc.Q + 1) * trunc.Nx * trunc.Ny,
      cplx(0.0));
  const std::size_t plane = static_cast<std::size_t>(trunc.Nx) * trunc.Ny;
  cplx* slice = xi.data() + static_cast<std::size_t>(trunc.Q) * plane;
  for (int ix = 0; ix < trunc.Nx; ++ix)
    for (int iy = 0; iy < trunc.Ny; ++iy) {
      double dx = std::abs(static_cast<double>(ix) / trunc.Nx - x0);
      double dy = std::abs(static_cast<double>(iy) / trunc.Ny - y0);
      dx = std::min(dx, 1.0 - dx);  // torus distance
      dy = std::min(dy, 1.0 - dy);
      slice[static_cast<std::size_t>(ix) * trunc.Ny + iy] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
    }
  return State::vector_state(params, trunc, std::move(xi));
}

}  // namespace qhm
