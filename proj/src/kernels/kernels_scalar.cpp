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

#include <algorithm>

#include "kernels_impl.hpp"

namespace qhm::kernels::detail {
namespace {

void s_caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_clincomb(cplx a, const cplx* x, cplx b, const cplx* y, cplx* z,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = a * x[i] + b * y[i];
}

void s_cscale(cplx a, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_cpmul(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void s_cpmul_acc(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] += x[i] * y[i];
}

void s_cconj(const cplx* x, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = std::conj(x[i]);
}

cplx s_csum(const cplx* x, std::size_t n) {
  return pairwise_cplx(0, n, [x](std::size_t i0, std::size_t m) {
    cplx acc = 0.0;
    for (std::size_t i = i0; i < i0 + m; ++i) acc += x[i];
    return acc;
  });
}

cplx s_cdotc(const cplx* x, const cplx* y, std::size_t n) {
  return pairwise_cplx(0, n, [x, y](std::size_t i0, std::size_t m) {
    cplx acc = 0.0;
    for (std::size_t i = i0; i < i0 + m; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
  });
}

cplx s_cdotu(const cplx* x, const cplx* y, std::size_t n) {
  return pairwise_cplx(0, n, [x, y](std::size_t i0, std::size_t m) {
    cplx acc = 0.0;
    for (std::size_t i = i0; i < i0 + m; ++i) acc += x[i] * y[i];
    return acc;
  });
}

cplx s_rdotc(const double* w, const cplx* x, std::size_t n) {
  return pairwise_cplx(0, n, [w, x](std::size_t i0, std::size_t m) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = i0; i < i0 + m; ++i) {
      re += w[i] * x[i].real();
      im += w[i] * x[i].imag();
    }
    return cplx(re, im);
  });
}

AbsMax s_abs2_max(const cplx* x, std::size_t n) {
  AbsMax best;
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    if (a2 > best.abs2) {
      best.abs2 = a2;
      best.index = i;
    }
  }
  return best;
}

void s_banded_cmatvec(const cplx* A, const cplx* x, cplx* y, std::size_t n,
                      std::size_t band) {
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t c0 = r > band ? r - band : 0;
    const std::size_t c1 = std::min(n - 1, r + band);
    cplx acc = 0.0;
    const cplx* row = A + r * n;
    for (std::size_t c = c0; c <= c1; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

double s_quad_max(const double* a2, const double* ab, const double* b2,
                  double s2, double st, double t2, std::size_t n) {
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = s2 * a2[i] + st * ab[i] + t2 * b2[i];
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {
      s_caxpy, s_clincomb, s_cscale,    s_cpmul,          s_cpmul_acc,
      s_cconj, s_csum,     s_cdotc,     s_cdotu,          s_rdotc,
      s_abs2_max,          s_banded_cmatvec,              s_quad_max,
  };
  return t;
}

}  // namespace qhm::kernels::detail
