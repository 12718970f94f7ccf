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

#include "qhm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "detail/grid_ops.hpp"
#include "qhm/errors.hpp"
#include "qhm/kernels.hpp"

namespace qhm {

namespace detail {

const DyTable& dy_table(int N) {
  static std::map<int, DyTable> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  DyTable t;
  t.N = N;
  const double pi = std::numbers::pi;
  const int M = (N % 2 == 0) ? N / 2 - 1 : (N - 1) / 2;
  t.coef.resize(M);
  for (int m = 1; m <= M; ++m) {
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    // d/dy on [0,1): 2*pi times the derivative on the standard circle
    if (N % 2 == 0)
      t.coef[m - 1] = 2.0 * pi * 0.5 * sgn / std::tan(pi * m / N);
    else
      t.coef[m - 1] = 2.0 * pi * 0.5 * sgn / std::sin(pi * m / N);
  }
  return cache.emplace(N, std::move(t)).first->second;
}

void apply_dy_row(const DyTable& t, const cplx* f, cplx* out) {
  const int N = t.N;
  thread_local std::vector<cplx> dbl;
  dbl.resize(2 * static_cast<std::size_t>(N));
  std::copy(f, f + N, dbl.begin());
  std::copy(f, f + N, dbl.begin() + N);
  const int M = static_cast<int>(t.coef.size());
  for (int j = 0; j < N; ++j) {
    const cplx* c = dbl.data() + N + j;
    cplx acc = 0.0;
    for (int m = 1; m <= M; ++m) acc += t.coef[m - 1] * (c[-m] - c[m]);
    out[j] = acc;
  }
}

namespace {

// fiber extended by two twist-folded ghost rows on each x-edge
void build_extended_fiber(const ModelParams& mp, const Truncation& t, int p,
                          const cplx* fiber, std::vector<cplx>& ext) {
  const int Nx = t.Nx, Ny = t.Ny;
  ext.resize(static_cast<std::size_t>(Nx + 4) * Ny);
  std::copy(fiber, fiber + static_cast<std::size_t>(Nx) * Ny,
            ext.begin() + 2 * static_cast<std::size_t>(Ny));
  thread_local std::vector<cplx> phase_m, phase_p;
  phase_m.resize(Ny);
  phase_p.resize(Ny);
  for (int j = 0; j < Ny; ++j) {
    const double cpy = static_cast<double>(mp.c) * p *
                       (static_cast<double>(j) / Ny);
    phase_m[j] = unit_phase(-cpy);
    phase_p[j] = unit_phase(cpy);
  }
  auto ghost = [&](std::size_t dst_row, int src_row,
                   const std::vector<cplx>& ph) {
    const cplx* src = fiber + static_cast<std::size_t>(src_row) * Ny;
    cplx* dst = ext.data() + dst_row * Ny;
    if (p == 0)
      std::copy(src, src + Ny, dst);
    else
      kernels::cpmul(ph.data(), src, dst, Ny);
  };
  ghost(0, Nx - 2, phase_m);
  ghost(1, Nx - 1, phase_m);
  ghost(static_cast<std::size_t>(Nx) + 2, 0, phase_p);
  ghost(static_cast<std::size_t>(Nx) + 3, 1, phase_p);
}

}  // namespace

void apply_d1_fiber(const ModelParams& mp, const Truncation& t, int p,
                    const cplx* fiber, cplx* out) {
  const int Nx = t.Nx, Ny = t.Ny;
  const std::size_t plane = static_cast<std::size_t>(Nx) * Ny;
  thread_local std::vector<cplx> ext, dn, dw;
  build_extended_fiber(mp, t, p, fiber, ext);
  dn.resize(plane);
  dw.resize(plane);
  // paired differences keep constants at exactly zero
  kernels::clincomb(1.0, ext.data() + 3 * static_cast<std::size_t>(Ny), -1.0,
                    ext.data() + 1 * static_cast<std::size_t>(Ny), dn.data(),
                    plane);
  kernels::clincomb(1.0, ext.data() + 4 * static_cast<std::size_t>(Ny), -1.0,
                    ext.data(), dw.data(), plane);
  const double h = 1.0 / Nx;
  // d1 = -(8*dn - dw) / (12 h)
  kernels::clincomb(-8.0 / (12.0 * h), dn.data(), 1.0 / (12.0 * h), dw.data(),
                    out, plane);
}

void apply_d2_fiber(const ModelParams& mp, const Truncation& t, int p,
                    const cplx* fiber, cplx* out) {
  const int Nx = t.Nx, Ny = t.Ny;
  const DyTable& dt = dy_table(Ny);
  thread_local std::vector<cplx> dyrow;
  dyrow.resize(Ny);
  const double twopicp = 2.0 * std::numbers::pi * mp.c * p;
  for (int ix = 0; ix < Nx; ++ix) {
    const cplx* row = fiber + static_cast<std::size_t>(ix) * Ny;
    cplx* orow = out + static_cast<std::size_t>(ix) * Ny;
    apply_dy_row(dt, row, dyrow.data());
    const cplx xcoef(0.0, twopicp * (static_cast<double>(ix) / Nx));
    kernels::clincomb(xcoef, row, -1.0, dyrow.data(), orow, Ny);
  }
}

void apply_d3_fiber(int p, const Truncation& t, const cplx* fiber, cplx* out) {
  const std::size_t plane = static_cast<std::size_t>(t.Nx) * t.Ny;
  const cplx s(0.0, 2.0 * std::numbers::pi * p);
  kernels::clincomb(s, fiber, 0.0, fiber, out, plane);
}

void resample_fiber(const Element& a, int p, double dx, double dy,
                    cplx* out) {
  const Truncation& t = a.trunc();
  const int Nx = t.Nx, Ny = t.Ny;
  if (!a.is_grid()) {
    for (int ix = 0; ix < Nx; ++ix)
      for (int iy = 0; iy < Ny; ++iy)
        out[static_cast<std::size_t>(ix) * Ny + iy] = a.fold_evaluate(
            static_cast<double>(ix) / Nx - dx,
            static_cast<double>(iy) / Ny - dy, p);
    return;
  }
  if (std::abs(p) > t.P) {
    std::fill(out, out + static_cast<std::size_t>(Nx) * Ny, cplx(0.0));
    return;
  }

  // one weight table per target y column, shared across the fiber
  thread_local std::vector<double> W, y0s;
  thread_local std::vector<cplx> g, tmp;
  W.resize(static_cast<std::size_t>(Ny) * Ny);
  y0s.resize(Ny);
  g.resize(static_cast<std::size_t>(Nx) * Ny);
  tmp.resize(Ny);
  for (int iy = 0; iy < Ny; ++iy) {
    double y0 = static_cast<double>(iy) / Ny - dy;
    y0 -= std::floor(y0);
    if (y0 >= 1.0) y0 = 0.0;
    y0s[iy] = y0;
    detail::trig_weights(Ny, y0, W.data() + static_cast<std::size_t>(iy) * Ny);
  }
  const cplx* fib = a.fiber(p).data();
  for (int ix = 0; ix < Nx; ++ix) {
    const cplx* row = fib + static_cast<std::size_t>(ix) * Ny;
    cplx* grow = g.data() + static_cast<std::size_t>(ix) * Ny;
    for (int iy = 0; iy < Ny; ++iy)
      grow[iy] =
          kernels::rdotc(W.data() + static_cast<std::size_t>(iy) * Ny, row, Ny);
  }

  // cubic in x with twist phases for stencil points beyond the edges
  std::unordered_map<int, std::vector<cplx>> phase_rows;
  auto phase_row = [&](int K) -> const cplx* {
    auto it = phase_rows.find(K);
    if (it == phase_rows.end()) {
      std::vector<cplx> r(Ny);
      for (int iy = 0; iy < Ny; ++iy)
        r[iy] = unit_phase(static_cast<double>(a.params().c) * K * p * y0s[iy]);
      it = phase_rows.emplace(K, std::move(r)).first;
    }
    return it->second.data();
  };

  std::fill(out, out + static_cast<std::size_t>(Nx) * Ny, cplx(0.0));
  for (int ix = 0; ix < Nx; ++ix) {
    double xr = static_cast<double>(ix) / Nx - dx;
    double k0 = std::floor(xr);
    double x0 = xr - k0;
    if (x0 >= 1.0) {
      x0 -= 1.0;
      k0 += 1.0;
    }
    double tm = x0 * Nx;
    int m0 = static_cast<int>(std::floor(tm));
    if (m0 >= Nx) m0 = Nx - 1;
    double wx[4];
    detail::cubic_weights(tm - m0, wx);
    cplx* orow = out + static_cast<std::size_t>(ix) * Ny;
    for (int m = -1; m <= 2; ++m) {
      if (wx[m + 1] == 0.0) continue;
      const int gi = m0 + m;
      int j = gi % Nx;
      if (j < 0) j += Nx;
      const int K = static_cast<int>(k0) + (gi - j) / Nx;
      const cplx* grow = g.data() + static_cast<std::size_t>(j) * Ny;
      if (K == 0 || p == 0) {
        kernels::caxpy(wx[m + 1], grow, orow, Ny);
      } else {
        kernels::cpmul(phase_row(K), grow, tmp.data(), Ny);
        kernels::caxpy(wx[m + 1], tmp.data(), orow, Ny);
      }
    }
  }
}

}  // namespace detail

namespace {

void require_compatible(const Element& a, const Element& b,
                        const char* what) {
  if (!same_params(a.params(), b.params()))
    throw ConfigError(std::string(what) + ": model parameters differ");
  if (!same_grid(a.trunc(), b.trunc()))
    throw ConfigError(std::string(what) + ": grid sizes differ");
}

}  // namespace

Element star(const Element& a, const Element& b, std::optional<int> max_band) {
  require_compatible(a, b, "star");
  const ModelParams mp = a.params();
  const int Pa = a.trunc().P, Pb = b.trunc().P;
  const int full_band = Pa + Pb;
  const int band = max_band ? std::min(*max_band, full_band) : full_band;
  const bool clamped = band < full_band;
  Truncation tout;
  tout.P = band;
  tout.Nx = a.trunc().Nx;
  tout.Ny = a.trunc().Ny;
  tout.Q = std::max({a.trunc().Q, b.trunc().Q, 2 * band});

  const bool carry_flag = clamped || a.band_clamped() || b.band_clamped();

  if (!a.is_grid() && !b.is_grid()) {
    auto pa = std::make_shared<Element>(a);
    auto pb = std::make_shared<Element>(b);
    auto value = [pa, pb, mp, Pa, Pb](double x, double y, int p) -> cplx {
      cplx acc = 0.0;
      const int qlo = std::max(-Pa, p - Pb), qhi = std::min(Pa, p + Pb);
      for (int q = qlo; q <= qhi; ++q) {
        const double sa = mp.hbar * (q - p);
        const double sb = mp.hbar * q;
        acc += pa->fold_evaluate(x - sa * mp.mu, y - sa * mp.nu, q) *
               pb->fold_evaluate(x - sb * mp.mu, y - sb * mp.nu, p - q);
      }
      return acc;
    };
    Element::EvalFn dx, dy;
    if (a.has_partials() && b.has_partials()) {
      dx = [pa, pb, mp, Pa, Pb](double x, double y, int p) -> cplx {
        cplx acc = 0.0;
        const int qlo = std::max(-Pa, p - Pb), qhi = std::min(Pa, p + Pb);
        for (int q = qlo; q <= qhi; ++q) {
          const double sa = mp.hbar * (q - p);
          const double sb = mp.hbar * q;
          const double xa = x - sa * mp.mu, ya = y - sa * mp.nu;
          const double xb = x - sb * mp.mu, yb = y - sb * mp.nu;
          acc += pa->fold_evaluate_dx(xa, ya, q) *
                     pb->fold_evaluate(xb, yb, p - q) +
                 pa->fold_evaluate(xa, ya, q) *
                     pb->fold_evaluate_dx(xb, yb, p - q);
        }
        return acc;
      };
      dy = [pa, pb, mp, Pa, Pb](double x, double y, int p) -> cplx {
        cplx acc = 0.0;
        const int qlo = std::max(-Pa, p - Pb), qhi = std::min(Pa, p + Pb);
        for (int q = qlo; q <= qhi; ++q) {
          const double sa = mp.hbar * (q - p);
          const double sb = mp.hbar * q;
          const double xa = x - sa * mp.mu, ya = y - sa * mp.nu;
          const double xb = x - sb * mp.mu, yb = y - sb * mp.nu;
          acc += pa->fold_evaluate_dy(xa, ya, q) *
                     pb->fold_evaluate(xb, yb, p - q) +
                 pa->fold_evaluate(xa, ya, q) *
                     pb->fold_evaluate_dy(xb, yb, p - q);
        }
        return acc;
      };
    }
    Element r = Element::closed_form(mp, tout, value, dx, dy);
    r.set_band_clamped(carry_flag);
    return r;
  }

  const int Nx = tout.Nx, Ny = tout.Ny;
  const std::size_t plane = static_cast<std::size_t>(Nx) * Ny;
  std::vector<cplx> vals(static_cast<std::size_t>(2 * band + 1) * plane);
  std::unordered_map<long, std::vector<cplx>> cache;
  thread_local std::vector<cplx> prod;
  prod.resize(plane);
  auto resampled = [&](const Element& el, int fiber, int shift) -> const cplx* {
    const long key = (&el == &a ? 0L : 1L) * (1L << 40) +
                     static_cast<long>(fiber + 512) * (1L << 20) +
                     (shift + 512);
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::vector<cplx> buf(plane);
      const double s = el.params().hbar * shift;
      detail::resample_fiber(el, fiber, s * el.params().mu, s * el.params().nu,
                             buf.data());
      it = cache.emplace(key, std::move(buf)).first;
    }
    return it->second.data();
  };
  for (int p = -band; p <= band; ++p) {
    cplx* outf = vals.data() + static_cast<std::size_t>(p + band) * plane;
    const int qlo = std::max(-Pa, p - Pb), qhi = std::min(Pa, p + Pb);
    for (int q = qlo; q <= qhi; ++q) {
      const cplx* ra = resampled(a, q, q - p);
      const cplx* rb = resampled(b, p - q, q);
      kernels::cpmul(ra, rb, prod.data(), plane);
      kernels::caxpy(1.0, prod.data(), outf, plane);
    }
  }
  Element r = Element::grid(mp, tout, std::move(vals));
  r.set_band_clamped(carry_flag);
  return r;
}

Element involution(const Element& a) {
  const Truncation& t = a.trunc();
  if (a.is_grid()) {
    std::vector<cplx> vals(a.values().size());
    const std::size_t plane = static_cast<std::size_t>(t.Nx) * t.Ny;
    for (int p = -t.P; p <= t.P; ++p)
      kernels::cconj(a.fiber(-p).data(),
                     vals.data() + static_cast<std::size_t>(p + t.P) * plane,
                     plane);
    Element r = Element::grid(a.params(), t, std::move(vals));
    r.set_band_clamped(a.band_clamped());
    return r;
  }
  auto src = std::make_shared<Element>(a);
  auto value = [src](double x, double y, int p) -> cplx {
    return std::conj(src->eval_fund(x, y, -p));
  };
  Element::EvalFn dx, dy;
  if (a.has_partials()) {
    dx = [src](double x, double y, int p) -> cplx {
      return std::conj(src->eval_fund_dx(x, y, -p));
    };
    dy = [src](double x, double y, int p) -> cplx {
      return std::conj(src->eval_fund_dy(x, y, -p));
    };
  }
  Element r = Element::closed_form(a.params(), t, value, dx, dy);
  r.set_band_clamped(a.band_clamped());
  return r;
}

cplx trace(const Element& a) {
  const Truncation& t = a.trunc();
  const std::size_t plane = static_cast<std::size_t>(t.Nx) * t.Ny;
  if (a.is_grid())
    return kernels::csum(a.fiber(0).data(), plane) / static_cast<double>(plane);
  thread_local std::vector<cplx> buf;
  buf.resize(plane);
  for (int ix = 0; ix < t.Nx; ++ix)
    for (int iy = 0; iy < t.Ny; ++iy)
      buf[static_cast<std::size_t>(ix) * t.Ny + iy] =
          a.eval_fund(static_cast<double>(ix) / t.Nx,
                      static_cast<double>(iy) / t.Ny, 0);
  return kernels::csum(buf.data(), plane) / static_cast<double>(plane);
}

Element group_action(const GroupPoint& g, const Element& a) {
  validate(g);
  const ModelParams mp = a.params();
  const Truncation& t = a.trunc();
  if (!a.is_grid()) {
    auto src = std::make_shared<Element>(a);
    const GroupPoint gp = g;
    auto phase = [gp, mp](double x, int p) {
      return unit_phase(p * (gp.t + mp.c * gp.s * (x - gp.r)));
    };
    auto value = [src, gp, phase](double x, double y, int p) -> cplx {
      return phase(x, p) * src->fold_evaluate(x - gp.r, y - gp.s, p);
    };
    Element::EvalFn dx, dy;
    if (a.has_partials()) {
      dx = [src, gp, mp, phase](double x, double y, int p) -> cplx {
        const cplx f = src->fold_evaluate(x - gp.r, y - gp.s, p);
        const cplx fx = src->fold_evaluate_dx(x - gp.r, y - gp.s, p);
        const cplx rate(0.0, 2.0 * std::numbers::pi * p * mp.c * gp.s);
        return phase(x, p) * (rate * f + fx);
      };
      dy = [src, gp, phase](double x, double y, int p) -> cplx {
        return phase(x, p) * src->fold_evaluate_dy(x - gp.r, y - gp.s, p);
      };
    }
    return Element::closed_form(mp, t, value, dx, dy);
  }
  const int Nx = t.Nx, Ny = t.Ny;
  const std::size_t plane = static_cast<std::size_t>(Nx) * Ny;
  std::vector<cplx> vals(a.values().size());
  for (int p = -t.P; p <= t.P; ++p) {
    cplx* fib = vals.data() + static_cast<std::size_t>(p + t.P) * plane;
    detail::resample_fiber(a, p, g.r, g.s, fib);
    if (p != 0) {
      for (int ix = 0; ix < Nx; ++ix) {
        const double x = static_cast<double>(ix) / Nx;
        const cplx ph = unit_phase(p * (g.t + mp.c * g.s * (x - g.r)));
        kernels::cscale(ph, fib + static_cast<std::size_t>(ix) * Ny, Ny);
      }
    }
  }
  Element r = Element::grid(mp, t, std::move(vals));
  r.set_band_clamped(a.band_clamped());
  return r;
}

GroupPoint compose(const ModelParams& params, const GroupPoint& g,
                   const GroupPoint& h) {
  return GroupPoint{g.r + h.r, g.s + h.s,
                    g.t + h.t + params.c * g.s * h.r};
}

namespace {

struct GoldenResult {
  double value = 0.0;
  double arg = 0.0;
};

template <class F>
GoldenResult golden_max(F f, double lo, double hi, int iters) {
  const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? GoldenResult{f1, x1} : GoldenResult{f2, x2};
}

}  // namespace

NormReport sup_sum_norm(const Element& a, const NormOptions& opts) {
  const Truncation& t = a.trunc();
  const int Nx = t.Nx, Ny = t.Ny, P = t.P;
  const std::size_t plane = static_cast<std::size_t>(Nx) * Ny;
  NormReport rep;
  rep.pmin = -P;
  rep.per_p_sups.resize(2 * P + 1, 0.0);
  rep.grid_argmax.resize(2 * P + 1, {0.0, 0.0});

  thread_local std::vector<cplx> scratch;
  for (int p = -P; p <= P; ++p) {
    const cplx* fib;
    if (a.is_grid()) {
      fib = a.fiber(p).data();
    } else {
      scratch.resize(plane);
      for (int ix = 0; ix < Nx; ++ix)
        for (int iy = 0; iy < Ny; ++iy)
          scratch[static_cast<std::size_t>(ix) * Ny + iy] =
              a.eval_fund(static_cast<double>(ix) / Nx,
                          static_cast<double>(iy) / Ny, p);
      fib = scratch.data();
    }
    const kernels::AbsMax m = kernels::abs2_max(fib, plane);
    double best = std::sqrt(m.abs2);
    double bx = static_cast<double>(m.index / Ny) / Nx;
    double by = static_cast<double>(m.index % Ny) / Ny;
    if (opts.polish && best > 0.0) {
      const double hx = 1.0 / Nx, hy = 1.0 / Ny;
      double cx = bx, cy = by;
      for (int round = 0; round < opts.polish_rounds; ++round) {
        auto gx = golden_max(
            [&](double x) { return std::abs(a.fold_evaluate(x, cy, p)); },
            cx - hx, cx + hx, 24);
        if (gx.value > best) {
          best = gx.value;
          cx = gx.arg;
        }
        auto gy = golden_max(
            [&](double y) { return std::abs(a.fold_evaluate(cx, y, p)); },
            cy - hy, cy + hy, 24);
        if (gy.value > best) {
          best = gy.value;
          cy = gy.arg;
        }
      }
      bx = cx - std::floor(cx);
      by = cy - std::floor(cy);
    }
    rep.per_p_sups[p + P] = best;
    rep.grid_argmax[p + P] = {bx, by};
  }
  // symmetric pairing keeps the sum invariant under the involution's fiber
  // reversal
  double s = rep.per_p_sups[P];
  for (int p = 1; p <= P; ++p)
    s += rep.per_p_sups[P + p] + rep.per_p_sups[P - p];
  rep.sup_sum = s;
  return rep;
}

namespace {

Element derive_grid(const Element& a, int which) {
  const Truncation& t = a.trunc();
  const std::size_t plane = static_cast<std::size_t>(t.Nx) * t.Ny;
  std::vector<cplx> vals(a.values().size());
  for (int p = -t.P; p <= t.P; ++p) {
    const cplx* in = a.fiber(p).data();
    cplx* out = vals.data() + static_cast<std::size_t>(p + t.P) * plane;
    switch (which) {
      case 1:
        detail::apply_d1_fiber(a.params(), t, p, in, out);
        break;
      case 2:
        detail::apply_d2_fiber(a.params(), t, p, in, out);
        break;
      default:
        detail::apply_d3_fiber(p, t, in, out);
        break;
    }
  }
  return Element::grid(a.params(), t, std::move(vals));
}

}  // namespace

Element derivation_1(const Element& a) {
  if (a.is_grid()) return derive_grid(a, 1);
  if (!a.has_partials())
    throw CapabilityError("derivation_1: closed form lacks analytic partials");
  auto src = std::make_shared<Element>(a);
  return Element::closed_form(
      a.params(), a.trunc(),
      [src](double x, double y, int p) { return -src->eval_fund_dx(x, y, p); });
}

Element derivation_2(const Element& a) {
  if (a.is_grid()) return derive_grid(a, 2);
  if (!a.has_partials())
    throw CapabilityError("derivation_2: closed form lacks analytic partials");
  auto src = std::make_shared<Element>(a);
  const int c = a.params().c;
  return Element::closed_form(
      a.params(), a.trunc(), [src, c](double x, double y, int p) -> cplx {
        const cplx f = src->eval_fund(x, y, p);
        const cplx fy = src->eval_fund_dy(x, y, p);
        return cplx(0.0, 2.0 * std::numbers::pi * c * p * x) * f - fy;
      });
}

Element derivation_3(const Element& a) {
  if (a.is_grid()) return derive_grid(a, 3);
  auto src = std::make_shared<Element>(a);
  auto mul = [](int p) { return cplx(0.0, 2.0 * std::numbers::pi * p); };
  auto value = [src, mul](double x, double y, int p) {
    return mul(p) * src->eval_fund(x, y, p);
  };
  Element::EvalFn dx, dy;
  if (a.has_partials()) {
    dx = [src, mul](double x, double y, int p) {
      return mul(p) * src->eval_fund_dx(x, y, p);
    };
    dy = [src, mul](double x, double y, int p) {
      return mul(p) * src->eval_fund_dy(x, y, p);
    };
  }
  return Element::closed_form(a.params(), a.trunc(), value, dx, dy);
}

double selfadjoint_deviation(const Element& a) {
  const Truncation& t = a.trunc();
  double dev = 0.0;
  if (a.is_grid()) {
    const std::size_t plane = static_cast<std::size_t>(t.Nx) * t.Ny;
    for (int p = 0; p <= t.P; ++p) {
      const cplx* vp = a.fiber(p).data();
      const cplx* vm = a.fiber(-p).data();
      for (std::size_t i = 0; i < plane; ++i)
        dev = std::max(dev, std::abs(vp[i] - std::conj(vm[i])));
    }
    return dev;
  }
  for (int p = 0; p <= t.P; ++p)
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double x = (i + 0.37) / 5.0, y = (j + 0.61) / 5.0;
        dev = std::max(dev, std::abs(a.eval_fund(x, y, p) -
                                     std::conj(a.eval_fund(x, y, -p))));
      }
  return dev;
}

LipReport lip_report(const Element& a, const NormOptions& opts) {
  if (selfadjoint_deviation(a) > 1e-8)
    std::cerr << "qhm: lip seminorm of a non-self-adjoint element\n";
  LipReport rep;
  rep.d1 = sup_sum_norm(derivation_1(a), opts);
  rep.d2 = sup_sum_norm(derivation_2(a), opts);
  rep.d3 = sup_sum_norm(derivation_3(a), opts);
  rep.value = std::max({rep.d1.sup_sum, rep.d2.sup_sum, rep.d3.sup_sum});
  return rep;
}

double lip_seminorm(const Element& a, const NormOptions& opts) {
  return lip_report(a, opts).value;
}

Element zero_mode(const Element& a) {
  const Truncation& t = a.trunc();
  if (a.is_grid()) {
    std::vector<cplx> vals(a.values().size(), cplx(0.0));
    const std::size_t plane = static_cast<std::size_t>(t.Nx) * t.Ny;
    std::copy_n(a.fiber(0).data(), plane,
                vals.data() + static_cast<std::size_t>(t.P) * plane);
    return Element::grid(a.params(), t, std::move(vals));
  }
  auto src = std::make_shared<Element>(a);
  auto value = [src](double x, double y, int p) -> cplx {
    return p == 0 ? src->eval_fund(x, y, 0) : cplx(0.0);
  };
  Element::EvalFn dx, dy;
  if (a.has_partials()) {
    dx = [src](double x, double y, int p) -> cplx {
      return p == 0 ? src->eval_fund_dx(x, y, 0) : cplx(0.0);
    };
    dy = [src](double x, double y, int p) -> cplx {
      return p == 0 ? src->eval_fund_dy(x, y, 0) : cplx(0.0);
    };
  }
  return Element::closed_form(a.params(), t, value, dx, dy);
}

cplx average_over_torus(const Element& a0) {
  const Truncation& t = a0.trunc();
  const int Nx = t.Nx, Ny = t.Ny;
  // precondition: no p != 0 support
  if (a0.is_grid()) {
    const std::size_t plane = static_cast<std::size_t>(Nx) * Ny;
    for (int p = -t.P; p <= t.P; ++p) {
      if (p == 0) continue;
      if (kernels::abs2_max(a0.fiber(p).data(), plane).abs2 > 0.0)
        throw ConfigError("average_over_torus: element has p != 0 support");
    }
  } else {
    for (int p = -t.P; p <= t.P; ++p) {
      if (p == 0) continue;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (std::abs(a0.eval_fund((i + 0.5) / 3.0, (j + 0.5) / 3.0, p)) >
              1e-12)
            throw ConfigError("average_over_torus: element has p != 0 support");
    }
  }

  // average the translated element at a few base points; the shifts land on
  // grid nodes, so each average is an exact rearrangement of the node sum
  std::vector<cplx> f0(static_cast<std::size_t>(Nx) * Ny);
  if (a0.is_grid()) {
    std::copy_n(a0.fiber(0).data(), f0.size(), f0.data());
  } else {
    for (int ix = 0; ix < Nx; ++ix)
      for (int iy = 0; iy < Ny; ++iy)
        f0[static_cast<std::size_t>(ix) * Ny + iy] =
            a0.eval_fund(static_cast<double>(ix) / Nx,
                         static_cast<double>(iy) / Ny, 0);
  }
  const int bases[4][2] = {{0, 0}, {Nx / 2, 0}, {0, Ny / 2}, {Nx / 3, Ny / 3}};
  cplx vals[4];
  for (int b = 0; b < 4; ++b) {
    cplx acc = 0.0;
    for (int ir = 0; ir < Nx; ++ir)
      for (int is = 0; is < Ny; ++is) {
        const int ix = (bases[b][0] - ir + Nx) % Nx;
        const int iy = (bases[b][1] - is + Ny) % Ny;
        acc += f0[static_cast<std::size_t>(ix) * Ny + iy];
      }
    vals[b] = acc / static_cast<double>(static_cast<std::size_t>(Nx) * Ny);
  }
  const double scale = std::max(1.0, std::abs(vals[0]));
  for (int b = 1; b < 4; ++b)
    if (std::abs(vals[b] - vals[0]) > 1e-8 * scale)
      throw NumericalError("average_over_torus: averaged element not constant",
                           0);
  return vals[0];
}

}  // namespace qhm
