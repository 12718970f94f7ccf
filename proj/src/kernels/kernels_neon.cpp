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

#include "kernels_impl.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>

namespace qhm::kernels::detail {
namespace {

// One complex double per float64x2_t, [re, im].

inline float64x2_t cmul1(float64x2_t a, float64x2_t b) {
  const float64x2_t br = vdupq_laneq_f64(b, 0);
  const float64x2_t bi = vdupq_laneq_f64(b, 1);
  const float64x2_t asw = vextq_f64(a, a, 1);  // [im, re]
  const float64x2_t sgn = {-1.0, 1.0};
  // [ar*br - ai*bi, ai*br + ar*bi]
  return vfmaq_f64(vmulq_f64(vmulq_f64(asw, bi), sgn), a, br);
}

inline const double* dptr(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

void v_caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const float64x2_t av = vld1q_f64(dptr(&a));
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t yv = vld1q_f64(dptr(y + i));
    yv = vaddq_f64(yv, cmul1(vld1q_f64(dptr(x + i)), av));
    vst1q_f64(dptr(y + i), yv);
  }
}

void v_clincomb(cplx a, const cplx* x, cplx b, const cplx* y, cplx* z,
                std::size_t n) {
  const float64x2_t av = vld1q_f64(dptr(&a));
  const float64x2_t bv = vld1q_f64(dptr(&b));
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vaddq_f64(cmul1(vld1q_f64(dptr(x + i)), av),
                                    cmul1(vld1q_f64(dptr(y + i)), bv));
    vst1q_f64(dptr(z + i), v);
  }
}

void v_cscale(cplx a, cplx* x, std::size_t n) {
  const float64x2_t av = vld1q_f64(dptr(&a));
  for (std::size_t i = 0; i < n; ++i)
    vst1q_f64(dptr(x + i), cmul1(vld1q_f64(dptr(x + i)), av));
}

void v_cpmul(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    vst1q_f64(dptr(z + i),
              cmul1(vld1q_f64(dptr(x + i)), vld1q_f64(dptr(y + i))));
}

void v_cpmul_acc(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t zv = vld1q_f64(dptr(z + i));
    zv = vaddq_f64(zv, cmul1(vld1q_f64(dptr(x + i)), vld1q_f64(dptr(y + i))));
    vst1q_f64(dptr(z + i), zv);
  }
}

void v_cconj(const cplx* x, cplx* z, std::size_t n) {
  const float64x2_t sgn = {1.0, -1.0};
  for (std::size_t i = 0; i < n; ++i)
    vst1q_f64(dptr(z + i), vmulq_f64(vld1q_f64(dptr(x + i)), sgn));
}

cplx v_csum(const cplx* x, std::size_t n) {
  return pairwise_cplx(0, n, [x](std::size_t i0, std::size_t m) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = i0; i < i0 + m; ++i)
      acc = vaddq_f64(acc, vld1q_f64(dptr(x + i)));
    return cplx(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  });
}

cplx v_cdotc(const cplx* x, const cplx* y, std::size_t n) {
  const float64x2_t sgn = {1.0, -1.0};
  return pairwise_cplx(0, n, [x, y, sgn](std::size_t i0, std::size_t m) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = i0; i < i0 + m; ++i) {
      const float64x2_t xc = vmulq_f64(vld1q_f64(dptr(x + i)), sgn);
      acc = vaddq_f64(acc, cmul1(xc, vld1q_f64(dptr(y + i))));
    }
    return cplx(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  });
}

cplx v_cdotu(const cplx* x, const cplx* y, std::size_t n) {
  return pairwise_cplx(0, n, [x, y](std::size_t i0, std::size_t m) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = i0; i < i0 + m; ++i)
      acc = vaddq_f64(acc,
                      cmul1(vld1q_f64(dptr(x + i)), vld1q_f64(dptr(y + i))));
    return cplx(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  });
}

cplx v_rdotc(const double* w, const cplx* x, std::size_t n) {
  return pairwise_cplx(0, n, [w, x](std::size_t i0, std::size_t m) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = i0; i < i0 + m; ++i)
      acc = vfmaq_f64(acc, vdupq_n_f64(w[i]), vld1q_f64(dptr(x + i)));
    return cplx(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  });
}

AbsMax v_abs2_max(const cplx* x, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    if (a2 > best) best = a2;
  }
  AbsMax out;
  out.abs2 = best;
  out.index = 0;
  if (best > 0.0) {
    for (std::size_t k = 0; k < n; ++k) {
      const double a2 =
          x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
      if (a2 == best) {
        out.index = k;
        break;
      }
    }
  }
  return out;
}

void v_banded_cmatvec(const cplx* A, const cplx* x, cplx* y, std::size_t n,
                      std::size_t band) {
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t c0 = r > band ? r - band : 0;
    const std::size_t c1 = std::min(n - 1, r + band);
    const cplx* row = A + r * n;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t c = c0; c <= c1; ++c)
      acc = vaddq_f64(acc,
                      cmul1(vld1q_f64(dptr(row + c)), vld1q_f64(dptr(x + c))));
    y[r] = cplx(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  }
}

double v_quad_max(const double* a2, const double* ab, const double* b2,
                  double s2, double st, double t2, std::size_t n) {
  const float64x2_t s2v = vdupq_n_f64(s2);
  const float64x2_t stv = vdupq_n_f64(st);
  const float64x2_t t2v = vdupq_n_f64(t2);
  float64x2_t vbest = vdupq_n_f64(-1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vmulq_f64(t2v, vld1q_f64(b2 + i));
    v = vfmaq_f64(v, stv, vld1q_f64(ab + i));
    v = vfmaq_f64(v, s2v, vld1q_f64(a2 + i));
    vbest = vmaxq_f64(vbest, v);
  }
  double best = std::max(vgetq_lane_f64(vbest, 0), vgetq_lane_f64(vbest, 1));
  for (; i < n; ++i) {
    const double v = s2 * a2[i] + st * ab[i] + t2 * b2[i];
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable t = {
      v_caxpy, v_clincomb, v_cscale,    v_cpmul,          v_cpmul_acc,
      v_cconj, v_csum,     v_cdotc,     v_cdotu,          v_rdotc,
      v_abs2_max,          v_banded_cmatvec,              v_quad_max,
  };
  return &t;
}

}  // namespace qhm::kernels::detail

#else

namespace qhm::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace qhm::kernels::detail

#endif
