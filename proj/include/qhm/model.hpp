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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "qhm/errors.hpp"

namespace qhm {

using cplx = std::complex<double>;

/// Deformation data of the model: the integer c of the lattice subgroup and
/// the three real deformation parameters.
struct ModelParams {
  int c = 1;
  double hbar = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

/// mu^2 + nu^2 must stay clear of zero; the paper only demands "!= 0", a
/// concrete floating-point margin is needed here.
inline constexpr double kMuNuEpsilon = 1e-12;

inline void validate(const ModelParams& p) {
  if (p.c < 1) throw ConfigError("ModelParams: c must be a positive integer");
  if (!(std::isfinite(p.hbar) && std::isfinite(p.mu) && std::isfinite(p.nu)))
    throw ConfigError("ModelParams: non-finite parameter");
  if (p.mu * p.mu + p.nu * p.nu <= kMuNuEpsilon)
    throw ConfigError("ModelParams: mu^2 + nu^2 must exceed 1e-12");
}

inline bool same_params(const ModelParams& a, const ModelParams& b) {
  return a.c == b.c && a.hbar == b.hbar && a.mu == b.mu && a.nu == b.nu;
}

/// Finite truncation: elements are supported on |p| <= P, sampled on an
/// Nx x Ny grid over the fundamental domain [0,1)x[0,1); fiber matrices act
/// on the band |p| <= Q.
struct Truncation {
  int P = 0;
  int Nx = 8;
  int Ny = 8;
  int Q = 0;
};

inline void validate(const Truncation& t) {
  if (t.P < 0) throw ConfigError("Truncation: P must be nonnegative");
  if (t.Nx < 8 || t.Ny < 8) throw ConfigError("Truncation: Nx, Ny must be >= 8");
  if (t.Q < 2 * t.P)
    throw ConfigError("Truncation: Q must be at least 2P");
}

inline bool same_grid(const Truncation& a, const Truncation& b) {
  return a.Nx == b.Nx && a.Ny == b.Ny;
}

/// A point (r, s, t) of the acting group, coordinates as a topological R^3.
struct GroupPoint {
  double r = 0.0;
  double s = 0.0;
  double t = 0.0;
};

inline void validate(const GroupPoint& g) {
  if (!(std::isfinite(g.r) && std::isfinite(g.s) && std::isfinite(g.t)))
    throw std::domain_error("GroupPoint: non-finite entry");
}

/// e(t) = exp(2*pi*i*t), with t reduced mod 1 before exponentiation so that
/// large integer multiples lose no precision. The reduction is symmetric
/// (to [-1/2, 1/2]) which keeps e(-t) == conj(e(t)) at the bit level.
inline cplx unit_phase(double t) {
  t -= std::round(t);
  const double a = 2.0 * std::numbers::pi * t;
  return cplx(std::cos(a), std::sin(a));
}

namespace detail {

/// splitmix64; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t salt) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ull * (salt + 1));
  return splitmix64(s);
}

}  // namespace detail
}  // namespace qhm
