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

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>

namespace qhm::kernels::detail {
namespace {

// Two complex doubles per __m256d, interleaved [re0, im0, re1, im1].

inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d bre = _mm256_movedup_pd(b);        // [br0, br0, br1, br1]
  const __m256d bim = _mm256_permute_pd(b, 0xF);   // [bi0, bi0, bi1, bi1]
  const __m256d asw = _mm256_permute_pd(a, 0x5);   // [ai0, ar0, ai1, ar1]
  return _mm256_fmaddsub_pd(a, bre, _mm256_mul_pd(asw, bim));
}

inline __m256d broadcast_c(cplx a) {
  return _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&a));
}

inline cplx hsum_c(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return cplx(out[0], out[1]);
}

inline const double* dptr(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

void v_caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d av = broadcast_c(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dptr(x + i));
    __m256d yv = _mm256_loadu_pd(dptr(y + i));
    yv = _mm256_add_pd(yv, cmul2(xv, av));
    _mm256_storeu_pd(dptr(y + i), yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_clincomb(cplx a, const cplx* x, cplx b, const cplx* y, cplx* z,
                std::size_t n) {
  const __m256d av = broadcast_c(a);
  const __m256d bv = broadcast_c(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dptr(x + i));
    const __m256d yv = _mm256_loadu_pd(dptr(y + i));
    _mm256_storeu_pd(dptr(z + i), _mm256_add_pd(cmul2(xv, av), cmul2(yv, bv)));
  }
  for (; i < n; ++i) z[i] = a * x[i] + b * y[i];
}

void v_cscale(cplx a, cplx* x, std::size_t n) {
  const __m256d av = broadcast_c(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dptr(x + i));
    _mm256_storeu_pd(dptr(x + i), cmul2(xv, av));
  }
  for (; i < n; ++i) x[i] *= a;
}

void v_cpmul(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dptr(x + i));
    const __m256d yv = _mm256_loadu_pd(dptr(y + i));
    _mm256_storeu_pd(dptr(z + i), cmul2(xv, yv));
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

void v_cpmul_acc(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dptr(x + i));
    const __m256d yv = _mm256_loadu_pd(dptr(y + i));
    __m256d zv = _mm256_loadu_pd(dptr(z + i));
    zv = _mm256_add_pd(zv, cmul2(xv, yv));
    _mm256_storeu_pd(dptr(z + i), zv);
  }
  for (; i < n; ++i) z[i] += x[i] * y[i];
}

void v_cconj(const cplx* x, cplx* z, std::size_t n) {
  const __m256d mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dptr(x + i));
    _mm256_storeu_pd(dptr(z + i), _mm256_xor_pd(xv, mask));
  }
  for (; i < n; ++i) z[i] = std::conj(x[i]);
}

cplx v_csum(const cplx* x, std::size_t n) {
  return pairwise_cplx(0, n, [x](std::size_t i0, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 2 <= i0 + m; i += 2)
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(dptr(x + i)));
    cplx out = hsum_c(acc);
    for (; i < i0 + m; ++i) out += x[i];
    return out;
  });
}

cplx v_cdotc(const cplx* x, const cplx* y, std::size_t n) {
  const __m256d mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  return pairwise_cplx(0, n, [x, y, mask](std::size_t i0, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 2 <= i0 + m; i += 2) {
      const __m256d xv =
          _mm256_xor_pd(_mm256_loadu_pd(dptr(x + i)), mask);  // conj
      const __m256d yv = _mm256_loadu_pd(dptr(y + i));
      acc = _mm256_add_pd(acc, cmul2(xv, yv));
    }
    cplx out = hsum_c(acc);
    for (; i < i0 + m; ++i) out += std::conj(x[i]) * y[i];
    return out;
  });
}

cplx v_cdotu(const cplx* x, const cplx* y, std::size_t n) {
  return pairwise_cplx(0, n, [x, y](std::size_t i0, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 2 <= i0 + m; i += 2) {
      const __m256d xv = _mm256_loadu_pd(dptr(x + i));
      const __m256d yv = _mm256_loadu_pd(dptr(y + i));
      acc = _mm256_add_pd(acc, cmul2(xv, yv));
    }
    cplx out = hsum_c(acc);
    for (; i < i0 + m; ++i) out += x[i] * y[i];
    return out;
  });
}

cplx v_rdotc(const double* w, const cplx* x, std::size_t n) {
  return pairwise_cplx(0, n, [w, x](std::size_t i0, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 4 <= i0 + m; i += 4) {
      const __m256d wv = _mm256_loadu_pd(w + i);
      const __m256d wlo = _mm256_permute4x64_pd(wv, 0x50);  // w0 w0 w1 w1
      const __m256d whi = _mm256_permute4x64_pd(wv, 0xFA);  // w2 w2 w3 w3
      acc = _mm256_fmadd_pd(wlo, _mm256_loadu_pd(dptr(x + i)), acc);
      acc = _mm256_fmadd_pd(whi, _mm256_loadu_pd(dptr(x + i + 2)), acc);
    }
    cplx out = hsum_c(acc);
    for (; i < i0 + m; ++i)
      out += cplx(w[i] * x[i].real(), w[i] * x[i].imag());
    return out;
  });
}

AbsMax v_abs2_max(const cplx* x, std::size_t n) {
  // Pass 1: SIMD max of |x|^2 (mul + hadd, no FMA, so the scalar verify pass
  // below reproduces the exact same values). Pass 2: first index attaining it.
  double best = 0.0;
  std::size_t i = 0;
  __m256d vbest = _mm256_setzero_pd();
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dptr(x + i));
    const __m256d sq = _mm256_mul_pd(xv, xv);
    vbest = _mm256_max_pd(vbest, _mm256_hadd_pd(sq, sq));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vbest);
  best = std::max(lanes[0], lanes[2]);
  for (; i < n; ++i) {
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
    __m256d acc = _mm256_setzero_pd();
    std::size_t c = c0;
    for (; c + 2 <= c1 + 1; c += 2) {
      const __m256d av = _mm256_loadu_pd(dptr(row + c));
      const __m256d xv = _mm256_loadu_pd(dptr(x + c));
      acc = _mm256_add_pd(acc, cmul2(av, xv));
    }
    cplx out = hsum_c(acc);
    for (; c <= c1; ++c) out += row[c] * x[c];
    y[r] = out;
  }
}

double v_quad_max(const double* a2, const double* ab, const double* b2,
                  double s2, double st, double t2, std::size_t n) {
  const __m256d s2v = _mm256_set1_pd(s2);
  const __m256d stv = _mm256_set1_pd(st);
  const __m256d t2v = _mm256_set1_pd(t2);
  __m256d vbest = _mm256_set1_pd(-1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(t2v, _mm256_loadu_pd(b2 + i));
    v = _mm256_fmadd_pd(stv, _mm256_loadu_pd(ab + i), v);
    v = _mm256_fmadd_pd(s2v, _mm256_loadu_pd(a2 + i), v);
    vbest = _mm256_max_pd(vbest, v);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vbest);
  double best = std::max(std::max(lanes[0], lanes[1]),
                         std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double v = s2 * a2[i] + st * ab[i] + t2 * b2[i];
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

const KernelTable* avx2_table() {
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
const KernelTable* avx2_table() { return nullptr; }
}  // namespace qhm::kernels::detail

#endif
