#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gbem/geometry.hpp"
#include "gbem/oracle.hpp"
#include "gbem/quadrature.hpp"

namespace gbem {

struct KernelValue {
  double value = 0.0;
  bool converged = true;
  long evals = 0;
};

// Alternating corner sum over k (upper, lower) bound pairs: evaluates an
// iterated antiderivative at every bound corner with sign (-1)^(#lower).
// f receives the k corner coordinates as a vector.
template <class F>
double diff_apply(const F& f, const std::vector<std::array<double, 2>>& bounds) {
  const std::size_t k = bounds.size();
  std::vector<double> arg(k);
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    int lowers = 0;
    for (std::size_t i = 0; i < k; ++i) {
      bool lower = (mask >> i & 1u) != 0;
      arg[i] = lower ? bounds[i][1] : bounds[i][0];
      lowers += lower ? 1 : 0;
    }
    double v = f(arg);
    if (!std::isfinite(v))
      throw NumericalError("non-finite corner evaluation in alternating sum");
    total += (lowers % 2 ? -1.0 : 1.0) * v;
  }
  return total;
}

namespace kern_detail {

// log(u + sqrt(u^2 + c2)), stable for u < 0; -inf when the argument vanishes.
inline double logUPlusR(double u, double c2) {
  double r = std::sqrt(u * u + c2);
  if (u >= 0.0) {
    double arg = u + r;
    return arg > 0.0 ? std::log(arg) : -std::numeric_limits<double>::infinity();
  }
  if (c2 == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(c2) - std::log(r - u);
}

// pref * log(u + sqrt(u^2 + c2)), with pref -> 0 dominating the divergence.
inline double mulLog(double pref, double u, double c2, double guard) {
  if (std::abs(pref) <= guard) return 0.0;
  return pref * logUPlusR(u, c2);
}

struct SignedArg {
  double sign;
  double val;
};

// Corner reduction of a double integral of f(x - y): the second antiderivative
// F2 enters as +F2(xu-yd) +F2(xd-yu) -F2(xu-yu) -F2(xd-yd).
inline std::array<SignedArg, 4> uCorners(double xd, double xu, double yd, double yu) {
  return {{{+1.0, xu - yd}, {+1.0, xd - yu}, {-1.0, xu - yu}, {-1.0, xd - yd}}};
}

// Fourfold antiderivative of 1/sqrt(u^2 + v^2) modulo terms killed by the
// corner sum.
inline double kCoplanar(double u, double v, double guard) {
  double s = std::sqrt(u * u + v * v);
  double g1 = mulLog(0.5 * u * v * v, u, v * v, guard) - 0.75 * u * v * v +
              mulLog(u * u * v, v, u * u, guard) - 0.5 * u * u * s;
  double g2 = (u * u + v * v) * s / 6.0 + mulLog(0.5 * u * u * v, v, u * u, guard) -
              0.5 * u * u * s;
  return g1 - g2;
}

inline double uCoplanar(const Span& sx, const Span& sy, const Span& tx, const Span& ty) {
  double scale = std::max({sx.length(), sy.length(), tx.length(), ty.length()});
  double guard = 1e-14 * scale * scale * scale;
  double acc = 0.0;
  for (const auto& cu : uCorners(sx.lo, sx.hi, tx.lo, tx.hi))
    for (const auto& cv : uCorners(sy.lo, sy.hi, ty.lo, ty.hi))
      acc += cu.sign * cv.sign * kCoplanar(cu.val, cv.val, guard);
  return acc / kFourPi;
}

// Pushforward density of (x,y) -> x-y on [xd,xu] x [yd,yu]: a tent supported
// on [xd-yu, xu-yd] with plateau min(widths). Smooth segments are delimited by
// the two knees and by 0 when interior.
struct Tent {
  double t0 = 0.0, t3 = 0.0, plateau = 0.0;
  double operator()(double t) const {
    return std::max(0.0, std::min({t - t0, plateau, t3 - t}));
  }
};

struct TentSegments {
  Tent w;
  std::array<double, 5> cuts{};
  int count = 0;
};

inline TentSegments tentSegments(double xd, double xu, double yd, double yu) {
  TentSegments ts;
  double t0 = xd - yu, t3 = xu - yd;
  double k1 = std::min(xd - yd, xu - yu), k2 = std::max(xd - yd, xu - yu);
  ts.w = Tent{t0, t3, std::min(xu - xd, yu - yd)};
  std::array<double, 5> pts{t0, k1, k2, t3, 0.0};
  int n = 4;
  if (t0 < 0.0 && 0.0 < t3) n = 5;
  std::sort(pts.begin(), pts.begin() + n);
  ts.count = 0;
  for (int i = 0; i < n; ++i)
    if (ts.count == 0 || pts[i] > ts.cuts[ts.count - 1]) ts.cuts[ts.count++] = pts[i];
  return ts;
}

template <class F>
double sumTentSegments(const TentSegments& ts, const F& f, const QuadratureConfig& cfg,
                       QuadStats& st) {
  double total = 0.0;
  for (int i = 0; i + 1 < ts.count; ++i)
    total += romberg(f, ts.cuts[i], ts.cuts[i + 1], cfg, st);
  return total;
}

// Parallel panels at plane offset b != 0: outer corner reduction along the
// first in-plane axis, tent-weighted 1-D quadrature along the second.
inline double uParallelOffset(const Span& sx, const Span& sy, const Span& tx, const Span& ty,
                              double b, const QuadratureConfig& cfg, QuadStats& st) {
  double b2 = b * b;
  auto corners = uCorners(sx.lo, sx.hi, tx.lo, tx.hi);
  auto ts = tentSegments(sy.lo, sy.hi, ty.lo, ty.hi);
  auto f = [&](double v) {
    double c2 = v * v + b2;
    double acc = 0.0;
    for (const auto& c : corners) {
      double r = std::sqrt(c.val * c.val + c2);
      acc += c.sign * (c.val * logUPlusR(c.val, c2) - r);
    }
    return ts.w(v) * acc;
  };
  return sumTentSegments(ts, f, cfg, st) / kFourPi;
}

// Same geometry for the double-layer kernel: the caller applies the source
// normal sign; b = test level - source level.
inline double qParallelOffset(const Span& sx, const Span& sy, const Span& tx, const Span& ty,
                              double b, const QuadratureConfig& cfg, QuadStats& st) {
  double b2 = b * b;
  auto corners = uCorners(sx.lo, sx.hi, tx.lo, tx.hi);
  auto ts = tentSegments(sy.lo, sy.hi, ty.lo, ty.hi);
  auto f = [&](double v) {
    double c2 = v * v + b2;
    double acc = 0.0;
    for (const auto& c : corners) acc += c.sign * std::sqrt(c.val * c.val + c2) / c2;
    return ts.w(v) * acc;
  };
  return b * sumTentSegments(ts, f, cfg, st) / kFourPi;
}

// Orthogonal panels sharing one in-plane axis. Panel i spans s1 (shared axis)
// and s3 (offsets from the source plane); panel j spans t1 (shared axis) and
// t2 (offsets from the test plane). Two 1-D quadratures remain after the
// corner reduction along the shared axis.
inline double uOrthogonal(const Span& s1, const Span& s3, const Span& t1, const Span& t2,
                          const QuadratureConfig& cfg, QuadStats& st) {
  auto corners = uCorners(s1.lo, s1.hi, t1.lo, t1.hi);
  double x3d = s3.lo, x3u = s3.hi;
  double y2d = t2.lo, y2u = t2.hi;
  double scale = std::max({s1.length(), t1.length(), s3.length(), t2.length(), 1e-30});
  double guard = 1e-14 * scale;

  auto fx = [&](double x) {
    double acc = 0.0;
    double x2 = x * x;
    for (const auto& c : corners) {
      double u2 = c.val * c.val;
      for (const auto& [sy, y] : {std::pair{+1.0, y2u}, std::pair{-1.0, y2d}}) {
        double c2 = x2 + y * y;
        double term = mulLog(0.5 * c.val * y, c.val, c2, guard) +
                      mulLog(0.5 * u2, y, u2 + x2, guard);
        double r = std::sqrt(u2 + c2);
        double g3 = 0.5 * y * r + mulLog(0.5 * (x2 + u2), y, u2 + x2, guard);
        acc += c.sign * sy * (term - g3);
      }
    }
    return acc;
  };

  auto fy = [&](double y) {
    double acc = 0.0;
    double y2 = y * y;
    for (const auto& c : corners)
      for (const auto& [sx, x] : {std::pair{+1.0, x3u}, std::pair{-1.0, x3d}}) {
        double c2 = x * x + y2;
        acc += c.sign * sx * mulLog(0.5 * c.val * x, c.val, c2, guard);
      }
    return acc;
  };

  double total = integrateWithSplits(fx, x3d, x3u, cfg, st) +
                 integrateWithSplits(fy, t2.lo, t2.hi, cfg, st);
  return total / kFourPi;
}

// Double-layer counterpart; source normal along its plane axis, sign applied
// by the caller.
inline double qOrthogonal(const Span& s1, const Span& s3, const Span& t1, const Span& t2,
                          const QuadratureConfig& cfg, QuadStats& st) {
  auto corners = uCorners(s1.lo, s1.hi, t1.lo, t1.hi);
  double x3d = s3.lo, x3u = s3.hi;
  double scale = std::max({s1.length(), t1.length(), s3.length(), t2.length(), 1e-30});
  double guard = 1e-14 * scale;
  auto fy = [&](double y) {
    double acc = 0.0;
    double y2 = y * y;
    for (const auto& [s3s, x3] : {std::pair{+1.0, x3d}, std::pair{-1.0, x3u}}) {
      double c2 = y2 + x3 * x3;
      for (const auto& c : corners) {
        double r = std::sqrt(c.val * c.val + c2);
        acc += s3s * c.sign * (mulLog(c.val, c.val, c2, guard) - r);
      }
    }
    return acc;
  };
  return integrateWithSplits(fy, t2.lo, t2.hi, cfg, st) / kFourPi;
}

struct OrthFrame {
  Span s1, s3, t1, t2;
};

// Maps a pair of mutually orthogonal panels into the reduced frame: shared
// axis spans plus per-panel offsets from the other panel's plane.
inline OrthFrame orthFrame(const Rect& pi, const Rect& pj) {
  int shared = 3 - pi.axis - pj.axis;
  OrthFrame f;
  f.s1 = pi.extent(shared);
  f.t1 = pj.extent(shared);
  Span i3 = pi.extent(pj.axis);
  Span j2 = pj.extent(pi.axis);
  f.s3 = {i3.lo - pj.level, i3.hi - pj.level};
  f.t2 = {j2.lo - pi.level, j2.hi - pi.level};
  return f;
}

inline bool rectLess(const Rect& a, const Rect& b) {
  auto key = [](const Rect& r) {
    return std::array<double, 6>{static_cast<double>(r.axis), r.level,
                                 r.spanA.lo, r.spanA.hi, r.spanB.lo, r.spanB.hi};
  };
  return key(a) < key(b);
}

}  // namespace kern_detail

// Galerkin single-layer pair integral over Ii x Ij (not normalized by areas).
// Symmetric in its arguments bit-for-bit: evaluation happens in a canonical
// argument order.
inline KernelValue u_pair_integral(const Rect& Ii, const Rect& Ij,
                                   const QuadratureConfig& cfg = {}) {
  using namespace kern_detail;
  const Rect& a = rectLess(Ij, Ii) ? Ij : Ii;
  const Rect& b = rectLess(Ij, Ii) ? Ii : Ij;
  KernelValue out;
  QuadStats st;
  if (a.axis == b.axis) {
    double off = a.level - b.level;
    if (off == 0.0) {
      out.value = uCoplanar(a.spanA, a.spanB, b.spanA, b.spanB);
    } else {
      out.value = uParallelOffset(a.spanA, a.spanB, b.spanA, b.spanB, off, cfg, st);
    }
  } else {
    auto f = orthFrame(a, b);
    out.value = uOrthogonal(f.s1, f.s3, f.t1, f.t2, cfg, st);
  }
  out.converged = st.converged;
  out.evals = st.evals;
  return out;
}

// Galerkin double-layer pair integral: test panel Ii against the source panel
// Ij carrying its oriented normal. Coplanar pairs vanish identically.
inline KernelValue q_pair_integral(const Rect& Ii, const Rect& Ij,
                                   const QuadratureConfig& cfg = {}) {
  using namespace kern_detail;
  KernelValue out;
  QuadStats st;
  double ns = static_cast<double>(Ij.normalSign);
  if (Ii.axis == Ij.axis) {
    double off = Ii.level - Ij.level;
    if (off == 0.0) {
      out.value = 0.0;
    } else {
      out.value = ns * qParallelOffset(Ii.spanA, Ii.spanB, Ij.spanA, Ij.spanB, off, cfg, st);
    }
  } else {
    auto f = orthFrame(Ii, Ij);
    out.value = ns * qOrthogonal(f.s1, f.s3, f.t1, f.t2, cfg, st);
  }
  out.converged = st.converged;
  out.evals = st.evals;
  return out;
}

// Single-layer potential of a unit density on R evaluated at the point x
// (collocation closed form).
inline double u_point_rect(const Vec3& x, const Rect& R) {
  using namespace kern_detail;
  auto ip = inplaneAxes(R.axis);
  double h = x[R.axis] - R.level;
  double u1 = R.spanA.lo - x[ip[0]], u2 = R.spanA.hi - x[ip[0]];
  double v1 = R.spanB.lo - x[ip[1]], v2 = R.spanB.hi - x[ip[1]];
  double scale = std::max({std::abs(u1), std::abs(u2), std::abs(v1), std::abs(v2),
                           std::abs(h), 1e-30});
  double guard = 1e-14 * scale;
  double h2 = h * h;
  auto F = [&](double u, double v) {
    double t = mulLog(v, u, v * v + h2, guard) + mulLog(u, v, u * u + h2, guard);
    if (h != 0.0) {
      double r = std::sqrt(u * u + v * v + h2);
      t -= h * std::atan(u * v / (h * r));
    }
    return t;
  };
  return (F(u2, v2) - F(u1, v2) - F(u2, v1) + F(u1, v1)) / kFourPi;
}

// Double-layer potential of a unit density on R at the point x; returns the
// signed solid-angle fraction. Zero when x lies in the panel plane.
inline double q_point_rect(const Vec3& x, const Rect& R) {
  double h = x[R.axis] - R.level;
  if (h == 0.0) return 0.0;
  auto ip = inplaneAxes(R.axis);
  double u1 = R.spanA.lo - x[ip[0]], u2 = R.spanA.hi - x[ip[0]];
  double v1 = R.spanB.lo - x[ip[1]], v2 = R.spanB.hi - x[ip[1]];
  double h2 = h * h;
  auto G = [&](double u, double v) {
    double r = std::sqrt(u * u + v * v + h2);
    return std::atan(u * v / (h * r));
  };
  double sum = G(u2, v2) - G(u1, v2) - G(u2, v1) + G(u1, v1);
  return R.normalSign * sum / kFourPi;
}

}  // namespace gbem
