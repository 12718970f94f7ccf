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

#include "qhm/kernels.hpp"

namespace qhm::kernels::detail {

struct KernelTable {
  void (*caxpy)(cplx, const cplx*, cplx*, std::size_t);
  void (*clincomb)(cplx, const cplx*, cplx, const cplx*, cplx*, std::size_t);
  void (*cscale)(cplx, cplx*, std::size_t);
  void (*cpmul)(const cplx*, const cplx*, cplx*, std::size_t);
  void (*cpmul_acc)(const cplx*, const cplx*, cplx*, std::size_t);
  void (*cconj)(const cplx*, cplx*, std::size_t);
  cplx (*csum)(const cplx*, std::size_t);
  cplx (*cdotc)(const cplx*, const cplx*, std::size_t);
  cplx (*cdotu)(const cplx*, const cplx*, std::size_t);
  cplx (*rdotc)(const double*, const cplx*, std::size_t);
  AbsMax (*abs2_max)(const cplx*, std::size_t);
  void (*banded_cmatvec)(const cplx*, const cplx*, cplx*, std::size_t,
                         std::size_t);
  double (*quad_max)(const double*, const double*, const double*, double,
                     double, double, std::size_t);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr if not compiled in / unsupported
const KernelTable* neon_table();

// Pairwise reduction skeleton shared by all backends: leaves of at most
// kPairwiseLeaf elements are reduced sequentially, then combined pairwise.
inline constexpr std::size_t kPairwiseLeaf = 64;

template <class Leaf>
cplx pairwise_cplx(const std::size_t i0, const std::size_t n, Leaf leaf) {
  if (n <= kPairwiseLeaf) return leaf(i0, n);
  const std::size_t h = n / 2;
  return pairwise_cplx(i0, h, leaf) + pairwise_cplx(i0 + h, n - h, leaf);
}

}  // namespace qhm::kernels::detail
