#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gbem/errors.hpp"

namespace gbem {

struct QuadratureConfig {
  double relTol = 1e-8;
  int maxLevels = 16;
};

// Per-evaluation bookkeeping: sample count and whether every Romberg tableau
// reached the requested tolerance.
struct QuadStats {
  long evals = 0;
  bool converged = true;
};

// Romberg integration (trapezoid + Richardson). Converged once the diagonal
// stabilizes twice in a row past level 4. Non-finite samples are a hard error;
// singular endpoints must be handled by the caller (see integrateSegment).
template <class F>
double romberg(const F& f, double a, double b, const QuadratureConfig& cfg, QuadStats& st) {
  if (a == b) return 0.0;
  int L = cfg.maxLevels;
  std::vector<double> prev(static_cast<size_t>(L) + 1), cur(static_cast<size_t>(L) + 1);
  double fa = f(a), fb = f(b);
  st.evals += 2;
  if (!std::isfinite(fa) || !std::isfinite(fb))
    throw NumericalError("non-finite integrand sample");
  double h = b - a;
  prev[0] = 0.5 * h * (fa + fb);
  int hits = 0;
  for (int k = 1; k <= L; ++k) {
    h *= 0.5;
    double tot = 0.0;
    long n = 1L << k;
    for (long i = 1; i < n; i += 2) {
      double s = f(a + i * h);
      ++st.evals;
      if (!std::isfinite(s)) throw NumericalError("non-finite integrand sample");
      tot += s;
    }
    cur[0] = 0.5 * prev[0] + h * tot;
    double p4 = 1.0;
    for (int m = 1; m <= k; ++m) {
      p4 *= 4.0;
      cur[m] = cur[m - 1] + (cur[m - 1] - prev[m - 1]) / (p4 - 1.0);
    }
    if (k >= 4) {
      double diff = std::abs(cur[k] - prev[k - 1]);
      hits = diff <= cfg.relTol * std::max(std::abs(cur[k]), 1e-300) ? hits + 1 : 0;
      if (hits >= 2) return cur[k];
    }
    std::swap(prev, cur);
  }
  st.converged = false;
  return prev[L];
}

// Integrate f on [a,b] where flagged endpoints carry an integrable endpoint
// singularity (log through inverse square root): substitute distance = t^4 so
// the transformed integrand 4t^3 f(a + t^4) vanishes at t = 0 for the whole
// class.
template <class F>
double integrateSegment(const F& f, double a, double b, bool singA, bool singB,
                        const QuadratureConfig& cfg, QuadStats& st) {
  if (a == b) return 0.0;
  if (singA && singB) {
    double m = 0.5 * (a + b);
    return integrateSegment(f, a, m, true, false, cfg, st) +
           integrateSegment(f, m, b, false, true, cfg, st);
  }
  if (singA) {
    double L = b - a;
    auto g = [&](double t) {
      return t == 0.0 ? 0.0 : 4.0 * t * t * t * f(a + t * t * t * t);
    };
    return romberg(g, 0.0, std::sqrt(std::sqrt(L)), cfg, st);
  }
  if (singB) {
    double L = b - a;
    auto g = [&](double t) {
      return t == 0.0 ? 0.0 : 4.0 * t * t * t * f(b - t * t * t * t);
    };
    return romberg(g, 0.0, std::sqrt(std::sqrt(L)), cfg, st);
  }
  return romberg(f, a, b, cfg, st);
}

// Integrate over [a,b] split at 0 when interior (the closest-approach point of
// the difference variable); endpoints probed for singularity.
template <class F>
double integrateWithSplits(const F& f, double a, double b, const QuadratureConfig& cfg,
                           QuadStats& st) {
  std::array<double, 3> pts{a, b, 0.0};
  int n = 2;
  if (a < 0.0 && 0.0 < b) {
    pts = {a, 0.0, b};
    n = 3;
  }
  auto singular = [&](double x) { return !std::isfinite(f(x)); };
  double total = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    total += integrateSegment(f, pts[i], pts[i + 1], singular(pts[i]), singular(pts[i + 1]),
                              cfg, st);
  return total;
}

// 6-node Gauss-Legendre rule on [-1, 1]; exact through degree 11.
inline constexpr int kGaussN = 6;
inline constexpr std::array<double, 6> kGaussX = {
    -0.9324695142031520278123016, -0.6612093864662645136613996,
    -0.2386191860831969086305017, 0.2386191860831969086305017,
    0.6612093864662645136613996,  0.9324695142031520278123016};
inline constexpr std::array<double, 6> kGaussW = {
    0.1713244923791703450402961, 0.3607615730481386075698335,
    0.4679139345726910473898703, 0.4679139345726910473898703,
    0.3607615730481386075698335, 0.1713244923791703450402961};

}  // namespace gbem
