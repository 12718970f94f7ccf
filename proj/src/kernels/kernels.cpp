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

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace qhm::kernels {
namespace {

using detail::KernelTable;

bool host_has_avx2() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &detail::scalar_table();
    case Backend::Avx2:
      return host_has_avx2() ? detail::avx2_table() : nullptr;
    case Backend::Neon:
      return detail::neon_table();
  }
  return nullptr;
}

Backend pick_default() {
  if (const char* env = std::getenv("QHM_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && table_for(Backend::Avx2))
      return Backend::Avx2;
    if (std::strcmp(env, "neon") == 0 && table_for(Backend::Neon))
      return Backend::Neon;
  }
  if (table_for(Backend::Avx2)) return Backend::Avx2;
  if (table_for(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

struct Dispatch {
  std::atomic<const KernelTable*> table;
  std::atomic<Backend> backend;
  Dispatch() {
    const Backend b = pick_default();
    backend.store(b);
    table.store(table_for(b));
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

inline const KernelTable& T() { return *dispatch().table.load(); }

}  // namespace

Backend active_backend() { return dispatch().backend.load(); }

const char* backend_name() {
  switch (active_backend()) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool force_backend(Backend b) {
  const KernelTable* t = table_for(b);
  if (!t) return false;
  dispatch().table.store(t);
  dispatch().backend.store(b);
  return true;
}

void reset_backend() { force_backend(pick_default()); }

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  T().caxpy(a, x, y, n);
}
void clincomb(cplx a, const cplx* x, cplx b, const cplx* y, cplx* z,
              std::size_t n) {
  T().clincomb(a, x, b, y, z, n);
}
void cscale(cplx a, cplx* x, std::size_t n) { T().cscale(a, x, n); }
void cpmul(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  T().cpmul(x, y, z, n);
}
void cpmul_acc(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  T().cpmul_acc(x, y, z, n);
}
void cconj(const cplx* x, cplx* z, std::size_t n) { T().cconj(x, z, n); }
cplx csum(const cplx* x, std::size_t n) { return T().csum(x, n); }
cplx cdotc(const cplx* x, const cplx* y, std::size_t n) {
  return T().cdotc(x, y, n);
}
cplx cdotu(const cplx* x, const cplx* y, std::size_t n) {
  return T().cdotu(x, y, n);
}
cplx rdotc(const double* w, const cplx* x, std::size_t n) {
  return T().rdotc(w, x, n);
}
AbsMax abs2_max(const cplx* x, std::size_t n) { return T().abs2_max(x, n); }
void banded_cmatvec(const cplx* A, const cplx* x, cplx* y, std::size_t n,
                    std::size_t band) {
  T().banded_cmatvec(A, x, y, n, band);
}
double quad_max(const double* a2, const double* ab, const double* b2,
                double s2, double st, double t2, std::size_t n) {
  return T().quad_max(a2, ab, b2, s2, st, t2, n);
}

}  // namespace qhm::kernels
