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

#include "qhm/element.hpp"

#include <cmath>
#include <fstream>

#include "qhm/errors.hpp"
#include "qhm/kernels.hpp"

namespace qhm {

using nlohmann::json;

namespace detail {

void trig_weights(int N, double y0, double* w) {
  const double t = y0 * N;
  const long j0 = std::lround(t);
  if (std::abs(t - static_cast<double>(j0)) < 1e-11) {
    // snap to the node: interpolation must be exact on grid points
    long j = j0 % N;
    if (j < 0) j += N;
    for (int k = 0; k < N; ++k) w[k] = 0.0;
    w[j] = 1.0;
    return;
  }
  const double pi = std::numbers::pi;
  if (N % 2 == 0) {
    for (int j = 0; j < N; ++j) {
      const double d = y0 - static_cast<double>(j) / N;
      w[j] = std::sin(N * pi * d) / (N * std::tan(pi * d));
    }
  } else {
    for (int j = 0; j < N; ++j) {
      const double d = y0 - static_cast<double>(j) / N;
      w[j] = std::sin(N * pi * d) / (N * std::sin(pi * d));
    }
  }
}

void cubic_weights(double u, double* wx) {
  wx[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
  wx[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  wx[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
  wx[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
}

}  // namespace detail

Element Element::grid(const ModelParams& params, const Truncation& trunc,
                      std::vector<cplx> values) {
  validate(params);
  validate(trunc);
  const std::size_t expected = static_cast<std::size_t>(2 * trunc.P + 1) *
                               trunc.Nx * trunc.Ny;
  if (values.size() != expected)
    throw ConfigError("Element: grid data size does not match truncation");
  for (const cplx& v : values)
    if (!(std::isfinite(v.real()) && std::isfinite(v.imag())))
      throw ConfigError("Element: non-finite grid value");
  Element e;
  e.params_ = params;
  e.trunc_ = trunc;
  e.flavor_ = Flavor::Grid;
  e.values_ = std::move(values);
  return e;
}

Element Element::closed_form(const ModelParams& params,
                             const Truncation& trunc, EvalFn value, EvalFn dx,
                             EvalFn dy) {
  validate(params);
  validate(trunc);
  if (!value) throw ConfigError("Element: missing evaluation callback");
  Element e;
  e.params_ = params;
  e.trunc_ = trunc;
  e.flavor_ = Flavor::ClosedForm;
  e.value_ = std::move(value);
  e.dx_ = std::move(dx);
  e.dy_ = std::move(dy);
  return e;
}

bool Element::has_partials() const {
  return flavor_ == Flavor::ClosedForm && dx_ && dy_;
}

const std::vector<cplx>& Element::values() const {
  if (flavor_ != Flavor::Grid)
    throw CapabilityError("Element: closed form has no grid storage");
  return values_;
}

std::span<const cplx> Element::fiber(int p) const {
  if (flavor_ != Flavor::Grid)
    throw CapabilityError("Element: closed form has no grid storage");
  if (std::abs(p) > trunc_.P) throw std::out_of_range("Element: fiber index");
  const std::size_t span = static_cast<std::size_t>(trunc_.Nx) * trunc_.Ny;
  return {values_.data() + static_cast<std::size_t>(p + trunc_.P) * span,
          span};
}

std::span<cplx> Element::fiber_mut(int p) {
  if (flavor_ != Flavor::Grid)
    throw CapabilityError("Element: closed form has no grid storage");
  if (std::abs(p) > trunc_.P) throw std::out_of_range("Element: fiber index");
  const std::size_t span = static_cast<std::size_t>(trunc_.Nx) * trunc_.Ny;
  return {values_.data() + static_cast<std::size_t>(p + trunc_.P) * span,
          span};
}

cplx Element::interpolate(double x0, double y0, int p) const {
  if (flavor_ != Flavor::Grid)
    throw CapabilityError("Element: interpolate requires grid flavor");
  const int Nx = trunc_.Nx, Ny = trunc_.Ny;
  thread_local std::vector<double> wbuf;
  wbuf.resize(Ny);
  detail::trig_weights(Ny, y0, wbuf.data());

  double tm = x0 * Nx;
  int m0 = static_cast<int>(std::floor(tm));
  if (m0 >= Nx) m0 = Nx - 1;
  const double u = tm - m0;
  double wx[4];
  detail::cubic_weights(u, wx);

  const std::size_t span = static_cast<std::size_t>(Nx) * Ny;
  const cplx* base =
      values_.data() + static_cast<std::size_t>(p + trunc_.P) * span;
  cplx out = 0.0;
  for (int m = -1; m <= 2; ++m) {
    if (wx[m + 1] == 0.0) continue;
    const int gi = m0 + m;
    int j = gi % Nx;
    if (j < 0) j += Nx;
    const int k = (gi - j) / Nx;
    cplx g = kernels::rdotc(wbuf.data(), base + static_cast<std::size_t>(j) * Ny,
                            Ny);
    if (k != 0 && p != 0)
      g *= unit_phase(static_cast<double>(params_.c) * k * p * y0);
    out += wx[m + 1] * g;
  }
  return out;
}

namespace {

// fold (x, y) into the fundamental domain; returns the integer x-offset k
inline void fold_point(double x, double y, double& x0, double& y0,
                       double& k) {
  k = std::floor(x);
  x0 = x - k;
  if (x0 >= 1.0) {  // can happen for tiny negative x
    x0 -= 1.0;
    k += 1.0;
  }
  y0 = y - std::floor(y);
  if (y0 >= 1.0) y0 = 0.0;
}

}  // namespace

cplx Element::eval_fund(double x0, double y0, int p) const {
  if (flavor_ == Flavor::Grid) return interpolate(x0, y0, p);
  return value_(x0, y0, p);
}

cplx Element::eval_fund_dx(double x0, double y0, int p) const {
  if (!(flavor_ == Flavor::ClosedForm && dx_))
    throw CapabilityError("Element: analytic x-partial not available");
  return dx_(x0, y0, p);
}

cplx Element::eval_fund_dy(double x0, double y0, int p) const {
  if (!(flavor_ == Flavor::ClosedForm && dy_))
    throw CapabilityError("Element: analytic y-partial not available");
  return dy_(x0, y0, p);
}

cplx Element::fold_evaluate(double x, double y, int p) const {
  if (!(std::isfinite(x) && std::isfinite(y)))
    throw std::domain_error("fold_evaluate: non-finite coordinate");
  if (std::abs(p) > trunc_.P) return 0.0;
  double x0, y0, k;
  fold_point(x, y, x0, y0, k);
  cplx v = eval_fund(x0, y0, p);
  if (k != 0.0 && p != 0)
    v *= unit_phase(static_cast<double>(params_.c) * k * p * y0);
  return v;
}

cplx Element::fold_evaluate_dx(double x, double y, int p) const {
  if (!(std::isfinite(x) && std::isfinite(y)))
    throw std::domain_error("fold_evaluate_dx: non-finite coordinate");
  if (std::abs(p) > trunc_.P) return 0.0;
  double x0, y0, k;
  fold_point(x, y, x0, y0, k);
  cplx v = eval_fund_dx(x0, y0, p);
  if (k != 0.0 && p != 0)
    v *= unit_phase(static_cast<double>(params_.c) * k * p * y0);
  return v;
}

cplx Element::fold_evaluate_dy(double x, double y, int p) const {
  if (!(std::isfinite(x) && std::isfinite(y)))
    throw std::domain_error("fold_evaluate_dy: non-finite coordinate");
  if (std::abs(p) > trunc_.P) return 0.0;
  double x0, y0, k;
  fold_point(x, y, x0, y0, k);
  cplx v = eval_fund_dy(x0, y0, p);
  if (k != 0.0 && p != 0) {
    // d/dy of e(c k p y) phi(x0, y, p)
    const double ckp = static_cast<double>(params_.c) * k * p;
    v += cplx(0.0, 2.0 * std::numbers::pi * ckp) * eval_fund(x0, y0, p);
    v *= unit_phase(ckp * y0);
  }
  return v;
}

Element identity_element(const ModelParams& params, const Truncation& trunc) {
  auto one = [](double, double, int p) -> cplx {
    return p == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
  };
  auto zero = [](double, double, int) -> cplx { return 0.0; };
  return Element::closed_form(params, trunc, one, zero, zero);
}

Element sample(const Element& el, const Truncation& trunc) {
  const int P = trunc.P, Nx = trunc.Nx, Ny = trunc.Ny;
  std::vector<cplx> vals(static_cast<std::size_t>(2 * P + 1) * Nx * Ny);
  std::size_t i = 0;
  for (int p = -P; p <= P; ++p)
    for (int ix = 0; ix < Nx; ++ix)
      for (int iy = 0; iy < Ny; ++iy)
        vals[i++] = el.fold_evaluate(static_cast<double>(ix) / Nx,
                                     static_cast<double>(iy) / Ny, p);
  return Element::grid(el.params(), trunc, std::move(vals));
}

double window_value(double x, const WindowSpec& w) {
  const double t = (x - w.delta) / (1.0 - 2.0 * w.delta);
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::pow(std::sin(std::numbers::pi * t), w.order);
}

double window_deriv(double x, const WindowSpec& w) {
  const double t = (x - w.delta) / (1.0 - 2.0 * w.delta);
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double pi = std::numbers::pi;
  return w.order * pi / (1.0 - 2.0 * w.delta) *
         std::pow(std::sin(pi * t), w.order - 1) * std::cos(pi * t);
}

namespace {

struct TrigTable {
  // coefficient block and mode phases for one evaluation point
  int Mx, My, P;
  std::vector<cplx> coeffs;

  cplx sum(double x, double y, int p, int dxm, int dym) const {
    // dxm/dym: 0 for value, 1 to include the 2*pi*i*m (resp. n) mode factor
    if (std::abs(p) > P) return 0.0;
    const int nx = 2 * Mx + 1, ny = 2 * My + 1;
    const cplx ex = unit_phase(x), ey = unit_phase(y);
    thread_local std::vector<cplx> exp_, eyp_;
    exp_.resize(nx);
    eyp_.resize(ny);
    exp_[Mx] = 1.0;
    eyp_[My] = 1.0;
    for (int m = 1; m <= Mx; ++m) {
      exp_[Mx + m] = exp_[Mx + m - 1] * ex;
      exp_[Mx - m] = std::conj(exp_[Mx + m]);
    }
    for (int n = 1; n <= My; ++n) {
      eyp_[My + n] = eyp_[My + n - 1] * ey;
      eyp_[My - n] = std::conj(eyp_[My + n]);
    }
    const cplx* block =
        coeffs.data() + static_cast<std::size_t>(p + P) * nx * ny;
    const double twopi = 2.0 * std::numbers::pi;
    cplx total = 0.0;
    for (int m = -Mx; m <= Mx; ++m) {
      cplx inner = 0.0;
      for (int n = -My; n <= My; ++n) {
        cplx c = block[(m + Mx) * ny + (n + My)];
        if (dym) c *= cplx(0.0, twopi * n);
        inner += c * eyp_[n + My];
      }
      if (dxm) inner *= cplx(0.0, twopi * m);
      total += inner * exp_[m + Mx];
    }
    return total;
  }
};

}  // namespace

Element windowed_element(const ModelParams& params, const Truncation& trunc,
                         std::vector<cplx> coeffs, int Mx, int My,
                         const WindowSpec& w) {
  if (Mx < 0 || My < 0 || Mx > 16 || My > 16)
    throw ConfigError("windowed_element: mode cutoff out of range");
  if (!(w.delta > 0.0 && w.delta < 0.5))
    throw ConfigError("windowed_element: delta must lie in (0, 0.5)");
  if (w.order < 2) throw ConfigError("windowed_element: order must be >= 2");
  const std::size_t expected = static_cast<std::size_t>(2 * trunc.P + 1) *
                               (2 * Mx + 1) * (2 * My + 1);
  if (coeffs.size() != expected)
    throw ConfigError("windowed_element: coefficient block size mismatch");
  auto tab = std::make_shared<TrigTable>(
      TrigTable{Mx, My, trunc.P, std::move(coeffs)});
  const WindowSpec ws = w;
  auto value = [tab, ws](double x, double y, int p) -> cplx {
    const cplx s = tab->sum(x, y, p, 0, 0);
    return p == 0 ? s : window_value(x, ws) * s;
  };
  auto dx = [tab, ws](double x, double y, int p) -> cplx {
    const cplx sx = tab->sum(x, y, p, 1, 0);
    if (p == 0) return sx;
    return window_deriv(x, ws) * tab->sum(x, y, p, 0, 0) +
           window_value(x, ws) * sx;
  };
  auto dy = [tab, ws](double x, double y, int p) -> cplx {
    const cplx sy = tab->sum(x, y, p, 0, 1);
    return p == 0 ? sy : window_value(x, ws) * sy;
  };
  return Element::closed_form(params, trunc, value, dx, dy);
}

Element random_element(std::uint64_t seed, const Truncation& trunc,
                       const ModelParams& params, double decay) {
  if (!(decay > 0.0)) throw ConfigError("random_element: decay must be > 0");
  const int Mx = 3, My = 3;
  detail::Draws draws(seed);
  std::vector<cplx> coeffs(static_cast<std::size_t>(2 * trunc.P + 1) *
                           (2 * Mx + 1) * (2 * My + 1));
  std::size_t i = 0;
  for (int p = -trunc.P; p <= trunc.P; ++p)
    for (int m = -Mx; m <= Mx; ++m)
      for (int n = -My; n <= My; ++n)
        coeffs[i++] = draws.gauss_c() *
                      std::exp(-decay * (m * m + n * n + p * p));
  return windowed_element(params, trunc, std::move(coeffs), Mx, My);
}

Element selfadjoint_part(const Element& el) {
  if (el.is_grid()) {
    const Truncation& t = el.trunc();
    std::vector<cplx> vals(el.values().size());
    const std::size_t span = static_cast<std::size_t>(t.Nx) * t.Ny;
    for (int p = -t.P; p <= t.P; ++p) {
      const cplx* vp = el.fiber(p).data();
      const cplx* vm = el.fiber(-p).data();
      cplx* out = vals.data() + static_cast<std::size_t>(p + t.P) * span;
      for (std::size_t i = 0; i < span; ++i)
        out[i] = 0.5 * (vp[i] + std::conj(vm[i]));
    }
    Element r = Element::grid(el.params(), t, std::move(vals));
    r.set_band_clamped(el.band_clamped());
    return r;
  }
  auto src = std::make_shared<Element>(el);
  auto value = [src](double x, double y, int p) -> cplx {
    return 0.5 * (src->eval_fund(x, y, p) +
                  std::conj(src->eval_fund(x, y, -p)));
  };
  Element::EvalFn dx, dy;
  if (el.has_partials()) {
    dx = [src](double x, double y, int p) -> cplx {
      return 0.5 * (src->eval_fund_dx(x, y, p) +
                    std::conj(src->eval_fund_dx(x, y, -p)));
    };
    dy = [src](double x, double y, int p) -> cplx {
      return 0.5 * (src->eval_fund_dy(x, y, p) +
                    std::conj(src->eval_fund_dy(x, y, -p)));
    };
  }
  return Element::closed_form(el.params(), el.trunc(), value, dx, dy);
}

json element_to_json(const Element& el) {
  if (!el.is_grid())
    throw ConfigError("element_to_json: sample closed forms to a grid first");
  const ModelParams& mp = el.params();
  const Truncation& t = el.trunc();
  json j;
  j["c"] = mp.c;
  j["hbar"] = mp.hbar;
  j["mu"] = mp.mu;
  j["nu"] = mp.nu;
  j["P"] = t.P;
  j["Nx"] = t.Nx;
  j["Ny"] = t.Ny;
  json data = json::array();
  for (int p = -t.P; p <= t.P; ++p) {
    json plane = json::array();
    for (int ix = 0; ix < t.Nx; ++ix) {
      json row = json::array();
      for (int iy = 0; iy < t.Ny; ++iy) {
        const cplx v = el.values()[el.index(p, ix, iy)];
        row.push_back(json::array({v.real(), v.imag()}));
      }
      plane.push_back(std::move(row));
    }
    data.push_back(std::move(plane));
  }
  j["data"] = std::move(data);
  return j;
}

Element element_from_json(const json& j) {
  try {
    ModelParams mp{j.at("c").get<int>(), j.at("hbar").get<double>(),
                   j.at("mu").get<double>(), j.at("nu").get<double>()};
    Truncation t;
    t.P = j.at("P").get<int>();
    t.Nx = j.at("Nx").get<int>();
    t.Ny = j.at("Ny").get<int>();
    t.Q = std::max(2 * t.P, 8);
    const json& data = j.at("data");
    if (static_cast<int>(data.size()) != 2 * t.P + 1)
      throw ConfigError("element_from_json: fiber count mismatch");
    std::vector<cplx> vals;
    vals.reserve(static_cast<std::size_t>(2 * t.P + 1) * t.Nx * t.Ny);
    for (const json& plane : data) {
      if (static_cast<int>(plane.size()) != t.Nx)
        throw ConfigError("element_from_json: x extent mismatch");
      for (const json& row : plane) {
        if (static_cast<int>(row.size()) != t.Ny)
          throw ConfigError("element_from_json: y extent mismatch");
        for (const json& v : row)
          vals.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      }
    }
    return Element::grid(mp, t, std::move(vals));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("element_from_json: ") + e.what());
  }
}

void save_element(const std::string& path, const Element& el) {
  std::ofstream out(path);
  if (!out) throw ConfigError("save_element: cannot open " + path);
  out << element_to_json(el).dump();
  if (!out) throw ConfigError("save_element: write failed for " + path);
}

Element load_element(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_element: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("load_element: malformed JSON: ") +
                      e.what());
  }
  return element_from_json(j);
}

}  // namespace qhm
