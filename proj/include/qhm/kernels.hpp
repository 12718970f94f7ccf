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

#include <complex>
#include <cstddef>

// Data-parallel inner loops used across the library. Every kernel has a
// scalar reference implementation and SIMD variants (AVX2 on x86-64, NEON on
// aarch64) selected at runtime. The variants are equivalence-tested against
// the scalar reference; sums and dot products use pairwise block summation
// in all backends so results are deterministic for a fixed backend.

namespace qhm::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2, Neon };

/// Backend currently dispatched to.
Backend active_backend();
const char* backend_name();

/// Force a specific backend (tests, debugging). Returns false if the host
/// cannot run it. The environment variable QHM_KERNELS={scalar,avx2,neon}
/// has the same effect at startup.
bool force_backend(Backend b);
void reset_backend();

// y[i] += a * x[i]
void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n);
// z[i] = a*x[i] + b*y[i]   (z may alias x or y)
void clincomb(cplx a, const cplx* x, cplx b, const cplx* y, cplx* z,
              std::size_t n);
// x[i] *= a
void cscale(cplx a, cplx* x, std::size_t n);
// z[i] = x[i] * y[i]
void cpmul(const cplx* x, const cplx* y, cplx* z, std::size_t n);
// z[i] += x[i] * y[i]
void cpmul_acc(const cplx* x, const cplx* y, cplx* z, std::size_t n);
// z[i] = conj(x[i])
void cconj(const cplx* x, cplx* z, std::size_t n);
// pairwise sum of x
cplx csum(const cplx* x, std::size_t n);
// pairwise sum of conj(x[i]) * y[i]
cplx cdotc(const cplx* x, const cplx* y, std::size_t n);
// pairwise sum of x[i] * y[i] (no conjugation)
cplx cdotu(const cplx* x, const cplx* y, std::size_t n);
// pairwise sum of w[i] * x[i], real weights
cplx rdotc(const double* w, const cplx* x, std::size_t n);

struct AbsMax {
  double abs2 = 0.0;       // max_i |x[i]|^2
  std::size_t index = 0;   // first attaining index
};
AbsMax abs2_max(const cplx* x, std::size_t n);

// y[r] = sum_{|c-r| <= band} A[r*n + c] * x[c], A dense row-major n x n
void banded_cmatvec(const cplx* A, const cplx* x, cplx* y, std::size_t n,
                    std::size_t band);

// max_i (s2*a2[i] + st*ab[i] + t2*b2[i]) over real arrays
double quad_max(const double* a2, const double* ab, const double* b2,
                double s2, double st, double t2, std::size_t n);

}  // namespace qhm::kernels
