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

#include <vector>

#include "qhm/model.hpp"

namespace qhm {

/// A positive normalized functional on the algebra: either the trace state
/// or a vector state built from a grid vector xi over (x, y, p), |p| <= Q,
/// with the discrete cell-measure inner product. Vector payloads are
/// normalized at construction.
class State {
 public:
  enum class Kind { Trace, Vector };

  static State trace_state(const ModelParams& params, const Truncation& trunc);
  /// Throws std::domain_error on a zero vector.
  static State vector_state(const ModelParams& params, const Truncation& trunc,
                            std::vector<cplx> xi);

  Kind kind() const { return kind_; }
  const ModelParams& params() const { return params_; }
  const Truncation& trunc() const { return trunc_; }
  /// Vector payload, indexed [(p+Q)*Nx + ix]*Ny + iy (empty for Trace).
  const std::vector<cplx>& xi() const { return xi_; }

  std::size_t index(int p, int ix, int iy) const {
    return (static_cast<std::size_t>(p + trunc_.Q) * trunc_.Nx + ix) *
               trunc_.Ny +
           iy;
  }

 private:
  State() = default;
  Kind kind_ = Kind::Trace;
  ModelParams params_;
  Truncation trunc_;
  std::vector<cplx> xi_;
};

/// Gaussian bump at (x0, y0) on the p = 0 slice, then normalized; the
/// workhorse "localized" vector state.
State localized_state(const ModelParams& params, const Truncation& trunc,
                      double x0, double y0, double width);

}  // namespace qhm
