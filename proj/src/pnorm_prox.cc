//
// Copyright 2026 The dpadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Mirror-descent prox step over the simplex with a squared p-norm distance.
//
// Writing z = q - c and kappa = 1 / (eta (p - 1)), the problem is
//
//   min <g, z> + kappa ||z||_p^2   s.t.  sum(z) = 0,  z >= -c.
//
// Its KKT conditions coincide with those of the separable problem
//
//   min <g, z> + (a / p) sum |z_i|^p  (same constraints)
//
// for a = 2 kappa ||z||_p^{2-p}. For fixed a the separable problem is solved
// coordinatewise up to the simplex multiplier nu:
//
//   z_i(nu) = max(-c_i, beta * phi(-(g_i + nu))),  phi(t) = sign(t)|t|^{1/(p-1)},
//
// with beta = a^{-1/(p-1)}; sum z_i(nu) is monotone in nu and its root is
// found by safeguarded Newton. The remaining scalar equation in beta is
// monotone in log beta (regula falsi) and explicit for p = 2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpadapt/error.h"
#include "dpadapt/linalg.h"
#include "dpadapt/optimizers.h"

namespace dpadapt {
namespace {

constexpr double kGapTol = 1e-9;
constexpr double kMaxExponent = 700.0;
constexpr int kMaxRootIterations = 300;
constexpr double kScanLimit = 1500.0;
// Above log_beta = lb0 + kResolvable * e the multiplier nu would have to be
// located to better than 1e-12 of the gradient spread, beyond double
// resolution; the solution there is a vertex to that accuracy.
constexpr double kResolvable = 27.0;

class SeparablePath {
 public:
  SeparablePath(std::span<const double> center, std::span<const double> g,
                double p)
      : c_(center), g_(g), p_(p), e_(1.0 / (p - 1.0)), z_(g.size()) {
    g_lo_ = *std::min_element(g.begin(), g.end());
    g_hi_ = *std::max_element(g.begin(), g.end());
    nu_ = -0.5 * (g_lo_ + g_hi_);
  }

  double spread() const { return g_hi_ - g_lo_; }
  double exponent() const { return e_; }
  const std::vector<double>& z() const { return z_; }

  // Solves sum z(nu) = 0 for the scale exp(log_beta); leaves z() filled.
  void Solve(double log_beta) {
    double lo = -g_hi_;
    double hi = -g_lo_;
    double nu = std::clamp(nu_, lo, hi);
    double prev_abs = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxRootIterations; ++it) {
      double slope = 0.0;
      const double s = Evaluate(nu, log_beta, &slope);
      if (s == 0.0) break;
      if (s > 0.0) {
        lo = nu;
      } else {
        hi = nu;
      }
      const double width_tol =
          4.0 * std::numeric_limits<double>::epsilon() *
          std::max({1.0, std::abs(lo), std::abs(hi)});
      if (hi - lo <= width_tol || std::abs(s) <= 1e-16) break;
      double next = slope < 0.0 ? nu - s / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi) || std::abs(s) > 0.5 * prev_abs) {
        next = 0.5 * (lo + hi);
      }
      prev_abs = std::abs(s);
      nu = next;
    }
    nu_ = nu;
    double unused = 0.0;
    Evaluate(nu, log_beta, &unused);
  }

  double NormP() const {
    double top = 0.0;
    for (double v : z_) top = std::max(top, std::abs(v));
    if (top == 0.0) return 0.0;
    double s = 0.0;
    for (double v : z_) s += std::pow(std::abs(v) / top, p_);
    return top * std::pow(s, 1.0 / p_);
  }

 private:
  // Returns sum z_i(nu), writes z and d(sum)/d(nu).
  double Evaluate(double nu, double log_beta, double* slope) {
    double sum = 0.0;
    double ds = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      const double t = -(g_[i] + nu);
      double u = 0.0;
      double du = 0.0;
      if (t != 0.0) {
        const double at = std::abs(t);
        const double mag =
            std::exp(std::min(log_beta + e_ * std::log(at), kMaxExponent));
        u = t > 0.0 ? mag : -mag;
        du = -e_ * mag / at;
      }
      if (u < -c_[i]) {
        z_[i] = -c_[i];
      } else {
        z_[i] = u;
        ds += du;
      }
      sum += z_[i];
    }
    *slope = ds;
    return sum;
  }

  std::span<const double> c_;
  std::span<const double> g_;
  double p_;
  double e_;
  double g_lo_ = 0.0;
  double g_hi_ = 0.0;
  double nu_ = 0.0;
  std::vector<double> z_;
};

// Root of H(log_beta) = log(2 kappa) + (2 - p) log||z||_p + (p - 1) log_beta.
// log||z|| grows with slope in [0, 1] in log_beta (exactly 1 while no bound
// is active), so H is increasing for every p > 1.
void SolveScale(SeparablePath& path, double kappa, double p) {
  auto h = [&](double lb) {
    path.Solve(lb);
    const double norm = path.NormP();
    if (norm == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(2.0 * kappa) + (2.0 - p) * std::log(norm) + (p - 1.0) * lb;
  };
  const double lb0 = -path.exponent() * std::log(path.spread());
  const double top = lb0 + kResolvable * path.exponent();
  double a = lb0;
  double ha = h(a);
  double b = a;
  double hb = ha;
  double step = 1.0;
  if (ha < 0.0) {
    while (true) {
      b = std::min(a + step, top);
      hb = h(b);
      if (hb >= 0.0) break;
      if (b >= top) return;  // path is left at the resolution limit
      a = b;
      ha = hb;
      step *= 2.0;
    }
  } else {
    while (true) {
      a = b - step;
      ha = h(a);
      if (ha < 0.0) break;
      b = a;
      hb = ha;
      step *= 2.0;
      if (lb0 - a > kScanLimit) {
        throw ConvergenceError("p-norm prox: could not bracket the norm scale",
                               std::numeric_limits<double>::infinity());
      }
    }
  }
  // Illinois regula falsi with bisection when an endpoint is infinite.
  int side = 0;
  double x = b;
  for (int it = 0; it < kMaxRootIterations; ++it) {
    if (std::isfinite(ha) && std::isfinite(hb) && hb != ha) {
      x = b - hb * (b - a) / (hb - ha);
      if (!(x > a && x < b)) x = 0.5 * (a + b);
    } else {
      x = 0.5 * (a + b);
    }
    const double hx = h(x);
    if (hx == 0.0 || b - a <= 1e-14 * std::max(1.0, std::abs(x))) break;
    if (hx < 0.0) {
      a = x;
      ha = hx;
      if (side == -1) hb *= 0.5;
      side = -1;
    } else {
      b = x;
      hb = hx;
      if (side == 1) ha *= 0.5;
      side = 1;
    }
    if (std::abs(hx) <= 1e-14) break;
  }
  path.Solve(x);
}

// Frank-Wolfe gap of the prox objective at q = center + z. Evaluated on the
// solver's z: recomputing z as q - center would cancel catastrophically, and
// |z|^{p-1} amplifies that error for p close to 1.
double ProxGap(std::span<const double> center, std::span<const double> g,
               double kappa, double p, const std::vector<double>& z) {
  double top = 0.0;
  for (double v : z) top = std::max(top, std::abs(v));
  double scale = 0.0;
  if (top > 0.0) {
    double s = 0.0;
    for (double v : z) s += std::pow(std::abs(v) / top, p);
    const double norm = top * std::pow(s, 1.0 / p);
    scale = 2.0 * kappa * std::pow(norm, 2.0 - p);
  }
  double inner = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double dz =
        z[i] == 0.0 ? 0.0
                    : std::copysign(std::pow(std::abs(z[i]), p - 1.0), z[i]);
    const double grad = g[i] + scale * dz;
    inner += (center[i] + z[i]) * grad;
    lowest = std::min(lowest, grad);
  }
  return inner - lowest;
}

}  // namespace

double PnormProxObjective(std::span<const double> center,
                          std::span<const double> g, double eta, double p,
                          std::span<const double> q) {
  double lin = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double z = q[i] - center[i];
    lin += g[i] * z;
    s += std::pow(std::abs(z), p);
  }
  return lin + std::pow(s, 2.0 / p) / (eta * (p - 1.0));
}

WeightVector PnormProx(const WeightVector& center, std::span<const double> g,
                       double eta, double p) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidParameter("prox step size must be positive and finite");
  }
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidParameter("prox exponent p must exceed 1, got " +
                           std::to_string(p));
  }
  if (g.size() != center.size()) {
    throw InvalidInput("prox: gradient length differs from the weight length");
  }
  for (double v : g) {
    if (!std::isfinite(v)) throw InvalidInput("prox: non-finite gradient");
  }
  const std::size_t m = center.size();
  if (m == 1) return center;
  const double spread = *std::max_element(g.begin(), g.end()) -
                        *std::min_element(g.begin(), g.end());
  if (spread == 0.0) return center;

  const double kappa = 1.0 / (eta * (p - 1.0));
  SeparablePath path(center.values(), g, p);
  if (p == 2.0) {
    path.Solve(-std::log(2.0 * kappa));
  } else {
    SolveScale(path, kappa, p);
  }

  std::vector<double> q(m);
  for (std::size_t i = 0; i < m; ++i) {
    q[i] = std::max(0.0, center[i] + path.z()[i]);
  }
  const double gap = ProxGap(center.values(), g, kappa, p, path.z());
  double g_inf = 0.0;
  for (double v : g) g_inf = std::max(g_inf, std::abs(v));
  if (!(gap <= kGapTol * (1.0 + g_inf))) {
    throw ConvergenceError(
        "p-norm prox did not reach tolerance; Frank-Wolfe gap " +
            std::to_string(gap),
        gap);
  }
  return WeightVector(std::move(q));
}

}  // namespace dpadapt
