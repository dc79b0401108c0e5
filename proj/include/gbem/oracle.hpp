#pragma once

#include <array>
#include <cmath>

#include "gbem/geometry.hpp"
#include "gbem/quadrature.hpp"

namespace gbem {

inline constexpr double kFourPi = 4.0 * 3.14159265358979323846;

enum class KernelKind { SingleLayer, DoubleLayer };

namespace oracle_detail {

inline bool sameGeometry(const Rect& a, const Rect& b) {
  return a.axis == b.axis && a.level == b.level && a.spanA == b.spanA && a.spanB == b.spanB;
}

inline std::array<Rect, 4> split4(const Rect& r) {
  double ma = r.spanA.mid(), mb = r.spanB.mid();
  Rect c = r;
  std::array<Rect, 4> out{c, c, c, c};
  out[0].spanA = {r.spanA.lo, ma};
  out[0].spanB = {r.spanB.lo, mb};
  out[1].spanA = {ma, r.spanA.hi};
  out[1].spanB = {r.spanB.lo, mb};
  out[2].spanA = {r.spanA.lo, ma};
  out[2].spanB = {mb, r.spanB.hi};
  out[3].spanA = {ma, r.spanA.hi};
  out[3].spanB = {mb, r.spanB.hi};
  return out;
}

inline Rect shifted(const Rect& r, double da, double db) {
  Rect s = r;
  s.spanA = {r.spanA.lo + da, r.spanA.hi + da};
  s.spanB = {r.spanB.lo + db, r.spanB.hi + db};
  return s;
}

// 4-D tensor-product Gauss rule over the panel pair.
template <class K>
double gaussPair(const K& kern, const Rect& r1, const Rect& r2) {
  auto nodes = [](const Span& s, double* x, double* w) {
    double c = s.mid(), h = 0.5 * s.length();
    for (int i = 0; i < kGaussN; ++i) {
      x[i] = c + h * kGaussX[i];
      w[i] = h * kGaussW[i];
    }
  };
  double xa[kGaussN], wa[kGaussN], xb[kGaussN], wb[kGaussN];
  double xc[kGaussN], wc[kGaussN], xd[kGaussN], wd[kGaussN];
  nodes(r1.spanA, xa, wa);
  nodes(r1.spanB, xb, wb);
  nodes(r2.spanA, xc, wc);
  nodes(r2.spanB, xd, wd);
  auto ip1 = inplaneAxes(r1.axis);
  auto ip2 = inplaneAxes(r2.axis);
  Vec3 p{}, q{};
  p[r1.axis] = r1.level;
  q[r2.axis] = r2.level;
  double acc = 0.0;
  for (int i = 0; i < kGaussN; ++i) {
    p[ip1[0]] = xa[i];
    for (int j = 0; j < kGaussN; ++j) {
      p[ip1[1]] = xb[j];
      double w1 = wa[i] * wb[j];
      for (int k = 0; k < kGaussN; ++k) {
        q[ip2[0]] = xc[k];
        double w2 = w1 * wc[k];
        for (int l = 0; l < kGaussN; ++l) {
          q[ip2[1]] = xd[l];
          acc += w2 * wd[l] * kern(p, q);
        }
      }
    }
  }
  return acc;
}

struct UStar {
  double operator()(const Vec3& p, const Vec3& q) const {
    double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
    return 1.0 / (kFourPi * std::sqrt(dx * dx + dy * dy + dz * dz));
  }
};

// Source normal along +/- sourceAxis.
struct QStar {
  int sourceAxis;
  double normalSign;
  double operator()(const Vec3& p, const Vec3& q) const {
    double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
    double r2 = dx * dx + dy * dy + dz * dz;
    double dn = (p[sourceAxis] - q[sourceAxis]) * normalSign;
    return dn / (kFourPi * r2 * std::sqrt(r2));
  }
};

// Recursive single-layer pair quadrature. Identical rects use the exact
// half-scale relation U = 2 * (cross-pair sum), with the 12 ordered cross
// pairs deduplicated by translation class into 3 evaluations.
inline double recU(const Rect& r1, const Rect& r2, int depth) {
  if (sameGeometry(r1, r2)) {
    auto kids = split4(r1);
    double w = 0.5 * r1.spanA.length(), h = 0.5 * r1.spanB.length();
    double a = recU(kids[0], shifted(kids[0], w, 0.0), depth - 1);
    double b = recU(kids[0], shifted(kids[0], 0.0, h), depth - 1);
    double c = recU(kids[0], shifted(kids[0], w, h), depth - 1);
    return 2.0 * (4.0 * a + 4.0 * b + 4.0 * c);
  }
  double d = rectDistance(r1, r2);
  double dm = std::max(r1.diameter(), r2.diameter());
  if (d >= dm || depth <= 0) return gaussPair(UStar{}, r1, r2);
  if (d == 0.0) {
    auto k1 = split4(r1), k2 = split4(r2);
    double acc = 0.0;
    for (const auto& c1 : k1)
      for (const auto& c2 : k2) acc += recU(c1, c2, depth - 1);
    return acc;
  }
  double acc = 0.0;
  if (r1.diameter() >= r2.diameter())
    for (const auto& c : split4(r1)) acc += recU(c, r2, depth - 1);
  else
    for (const auto& c : split4(r2)) acc += recU(r1, c, depth - 1);
  return acc;
}

// Recursive double-layer pair quadrature; coplanar pairs vanish identically.
inline double recQ(const Rect& r1, const Rect& r2, int depth) {
  if (r1.axis == r2.axis && r1.level == r2.level) return 0.0;
  double d = rectDistance(r1, r2);
  double dm = std::max(r1.diameter(), r2.diameter());
  QStar kern{r2.axis, static_cast<double>(r2.normalSign)};
  if (d >= dm || depth <= 0) return gaussPair(kern, r1, r2);
  if (d == 0.0) {
    auto k1 = split4(r1), k2 = split4(r2);
    double acc = 0.0;
    for (const auto& c1 : k1)
      for (const auto& c2 : k2) acc += recQ(c1, c2, depth - 1);
    return acc;
  }
  double acc = 0.0;
  if (r1.diameter() >= r2.diameter())
    for (const auto& c : split4(r1)) acc += recQ(c, r2, depth - 1);
  else
    for (const auto& c : split4(r2)) acc += recQ(r1, c, depth - 1);
  return acc;
}

// Cut a span at the interior points of `cuts`, preserving order.
inline void cutSpan(const Span& s, double c0, double c1, std::vector<Span>& out) {
  std::array<double, 4> pts{s.lo, s.hi, 0, 0};
  int n = 2;
  if (c0 > s.lo && c0 < s.hi) pts[n++] = c0;
  if (c1 > s.lo && c1 < s.hi && c1 != c0) pts[n++] = c1;
  std::sort(pts.begin(), pts.begin() + n);
  out.clear();
  for (int i = 0; i + 1 < n; ++i) out.push_back({pts[i], pts[i + 1]});
}

// Split r at the projections of the other rect's world extents so contact
// boundaries become cell boundaries; yields up to 9 pieces.
inline std::vector<Rect> presplit(const Rect& r, const Rect& other) {
  auto ip = inplaneAxes(r.axis);
  Span oa = other.extent(ip[0]), ob = other.extent(ip[1]);
  std::vector<Span> as, bs;
  cutSpan(r.spanA, oa.lo, oa.hi, as);
  cutSpan(r.spanB, ob.lo, ob.hi, bs);
  std::vector<Rect> out;
  out.reserve(as.size() * bs.size());
  for (const auto& sa : as)
    for (const auto& sb : bs) {
      Rect piece = r;
      piece.spanA = sa;
      piece.spanB = sb;
      out.push_back(piece);
    }
  return out;
}

}  // namespace oracle_detail

// Brute-force reference for the panel-pair integrals: recursive dyadic
// subdivision toward the closest-approach region with tensor Gauss on
// well-separated pairs. Refinement depth >= 1; successive depths form a
// Cauchy sequence on touching pairs (error contracts geometrically).
inline double oracle_pair_integral(KernelKind kind, const Rect& Ii, const Rect& Ij, int depth) {
  using namespace oracle_detail;
  if (kind == KernelKind::SingleLayer) {
    if (sameGeometry(Ii, Ij)) return recU(Ii, Ij, depth);
    double acc = 0.0;
    for (const auto& p1 : presplit(Ii, Ij))
      for (const auto& p2 : presplit(Ij, Ii)) acc += recU(p1, p2, depth);
    return acc;
  }
  if (Ii.axis == Ij.axis && Ii.level == Ij.level) return 0.0;
  double acc = 0.0;
  for (const auto& p1 : presplit(Ii, Ij))
    for (const auto& p2 : presplit(Ij, Ii)) acc += recQ(p1, p2, depth);
  return acc;
}

}  // namespace gbem
