#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gbem/errors.hpp"

namespace gbem {

using Vec3 = std::array<double, 3>;

// Closed interval [lo, hi]. Valid iff lo < hi; degenerate intervals are used
// only as point extents (lo == hi) for rect planes.
struct Span {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool valid() const { return lo < hi; }
  bool operator==(const Span&) const = default;
};

// Positive-length overlap test on closed intervals.
inline bool overlapsOpen(const Span& a, const Span& b) {
  return std::min(a.hi, b.hi) > std::max(a.lo, b.lo);
}

inline Span intersect(const Span& a, const Span& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// In-plane axes of a plane normal to `axis`, ordered by axis index.
inline std::array<int, 2> inplaneAxes(int axis) {
  switch (axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

// Axis-aligned rectangle in the plane x[axis] == level. spanA/spanB are the
// extents along the two in-plane axes in axis-index order. normalSign gives
// the orientation of the unit normal along +axis (+1) or -axis (-1).
struct Rect {
  int axis = 2;
  double level = 0.0;
  Span spanA;
  Span spanB;
  int normalSign = 1;

  double area() const { return spanA.length() * spanB.length(); }

  Span extent(int worldAxis) const {
    if (worldAxis == axis) return {level, level};
    auto ip = inplaneAxes(axis);
    return worldAxis == ip[0] ? spanA : spanB;
  }

  Vec3 center() const {
    Vec3 c;
    for (int k = 0; k < 3; ++k) c[k] = extent(k).mid();
    return c;
  }

  double diameter() const { return std::hypot(spanA.length(), spanB.length()); }

  bool operator==(const Rect&) const = default;
};

// Shortest distance between the closed world extents of two rects.
inline double rectDistance(const Rect& a, const Rect& b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    Span ea = a.extent(k), eb = b.extent(k);
    double g = std::max({eb.lo - ea.hi, ea.lo - eb.hi, 0.0});
    s += g * g;
  }
  return std::sqrt(s);
}

struct Cuboid {
  Vec3 lo{0, 0, 0};
  Vec3 hi{0, 0, 0};

  bool valid() const {
    return lo[0] < hi[0] && lo[1] < hi[1] && lo[2] < hi[2];
  }
  double volume() const {
    return (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
  }
  Span extent(int k) const { return {lo[k], hi[k]}; }
  Vec3 center() const {
    return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
  }
  bool containsClosed(const Cuboid& c) const {
    for (int k = 0; k < 3; ++k)
      if (c.lo[k] < lo[k] || c.hi[k] > hi[k]) return false;
    return true;
  }
  bool containsStrict(const Cuboid& c) const {
    for (int k = 0; k < 3; ++k)
      if (c.lo[k] <= lo[k] || c.hi[k] >= hi[k]) return false;
    return true;
  }
  bool operator==(const Cuboid&) const = default;
};

inline bool interiorsOverlap(const Cuboid& a, const Cuboid& b) {
  for (int k = 0; k < 3; ++k)
    if (std::min(a.hi[k], b.hi[k]) <= std::max(a.lo[k], b.lo[k])) return false;
  return true;
}

// True iff the closed boxes share a face patch of positive area.
inline bool positiveAreaContact(const Cuboid& a, const Cuboid& b) {
  if (interiorsOverlap(a, b)) return false;
  for (int k = 0; k < 3; ++k) {
    if (a.hi[k] == b.lo[k] || b.hi[k] == a.lo[k]) {
      auto ip = inplaneAxes(k);
      if (overlapsOpen(a.extent(ip[0]), b.extent(ip[0])) &&
          overlapsOpen(a.extent(ip[1]), b.extent(ip[1])))
        return true;
    }
  }
  return false;
}

// Nearest distance from a rect to a closed cuboid.
inline double rectCuboidDistance(const Rect& r, const Cuboid& c) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    Span e = r.extent(k);
    double g = std::max({c.lo[k] - e.hi, e.lo - c.hi[k], 0.0});
    s += g * g;
  }
  return std::sqrt(s);
}

enum class FaceKind { ConductorSurface, DirichletOuter, NeumannOuter, Interface };

inline const char* faceKindName(FaceKind k) {
  switch (k) {
    case FaceKind::ConductorSurface: return "conductor";
    case FaceKind::DirichletOuter: return "dirichlet";
    case FaceKind::NeumannOuter: return "neumann";
    default: return "interface";
  }
}

// Oriented boundary patch. Conductor faces point out of the conductor into the
// surrounding region; outer faces point into the domain; interface faces point
// from regionA into regionB with regionA < regionB.
struct BoundaryFace {
  Rect rect;
  FaceKind kind = FaceKind::ConductorSurface;
  int netId = -1;
  int regionA = -1;
  int regionB = -1;
};

struct Conductor {
  int netId = -1;
  std::vector<Cuboid> cuboids;
  bool operator==(const Conductor&) const = default;
};

struct DielectricRegion {
  int regionId = -1;
  Cuboid box;
  double relPermittivity = 1.0;
  bool operator==(const DielectricRegion&) const = default;
};

enum class OuterBC { Dirichlet, Neumann };

// Domain face index: 2*axis + (hi side ? 1 : 0), i.e. -x,+x,-y,+y,-z,+z.
inline int outerFaceIndex(int axis, bool hiSide) { return 2 * axis + (hiSide ? 1 : 0); }

inline const char* outerFaceName(int idx) {
  static const char* names[6] = {"-x", "+x", "-y", "+y", "-z", "+z"};
  return names[idx];
}

struct Scene {
  Cuboid domainBox;
  std::vector<DielectricRegion> regions;  // ascending regionId
  std::vector<Conductor> conductors;      // ascending netId
  std::array<OuterBC, 6> outerBC{OuterBC::Dirichlet, OuterBC::Dirichlet,
                                 OuterBC::Dirichlet, OuterBC::Dirichlet,
                                 OuterBC::Dirichlet, OuterBC::Dirichlet};
  std::map<int, int> regionOfNet;  // netId -> regionId

  const DielectricRegion* regionById(int id) const {
    for (const auto& r : regions)
      if (r.regionId == id) return &r;
    return nullptr;
  }
  const Conductor* netById(int id) const {
    for (const auto& c : conductors)
      if (c.netId == id) return &c;
    return nullptr;
  }
  bool operator==(const Scene&) const = default;
};

// Nearest distance from a rect to a conductor (min over its cells).
inline double face_distance(const Rect& r, const Conductor& net) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : net.cuboids) d = std::min(d, rectCuboidDistance(r, c));
  return d;
}

namespace detail {

inline std::string fmtNum(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline std::string fmtVec(const Vec3& v) {
  return "(" + fmtNum(v[0]) + "," + fmtNum(v[1]) + "," + fmtNum(v[2]) + ")";
}

}  // namespace detail

// Validates and assembles a scene. Throws ValidationError with a specific
// message naming the offending entity on the first violated invariant.
inline Scene build_scene(const Cuboid& domain,
                         std::vector<DielectricRegion> regions,
                         std::vector<Conductor> conductors,
                         const std::array<OuterBC, 6>& outerBC) {
  Scene s;
  if (!domain.valid())
    throw ValidationError("domain box is degenerate: lo " + detail::fmtVec(domain.lo) +
                          " hi " + detail::fmtVec(domain.hi));
  s.domainBox = domain;
  s.outerBC = outerBC;

  if (regions.empty()) throw ValidationError("scene has no dielectric regions");
  std::sort(regions.begin(), regions.end(),
            [](const auto& a, const auto& b) { return a.regionId < b.regionId; });
  for (size_t i = 0; i < regions.size(); ++i) {
    const auto& r = regions[i];
    if (i > 0 && regions[i - 1].regionId == r.regionId)
      throw ValidationError("duplicate region id " + std::to_string(r.regionId));
    if (!r.box.valid())
      throw ValidationError("region " + std::to_string(r.regionId) + " box is degenerate");
    if (!(r.relPermittivity > 0.0))
      throw ValidationError("region " + std::to_string(r.regionId) +
                            " relative permittivity must be positive");
    if (!domain.containsClosed(r.box))
      throw ValidationError("region " + std::to_string(r.regionId) +
                            " extends outside the domain box");
  }
  double volSum = 0.0;
  for (const auto& r : regions) volSum += r.box.volume();
  for (size_t i = 0; i < regions.size(); ++i)
    for (size_t j = i + 1; j < regions.size(); ++j)
      if (interiorsOverlap(regions[i].box, regions[j].box))
        throw ValidationError("regions " + std::to_string(regions[i].regionId) + " and " +
                              std::to_string(regions[j].regionId) + " overlap");
  if (std::abs(volSum - domain.volume()) > 1e-12 * domain.volume())
    throw ValidationError("regions do not tile the domain box (volume gap)");
  s.regions = std::move(regions);

  std::sort(conductors.begin(), conductors.end(),
            [](const auto& a, const auto& b) { return a.netId < b.netId; });
  for (size_t i = 0; i < conductors.size(); ++i) {
    const auto& c = conductors[i];
    if (i > 0 && conductors[i - 1].netId == c.netId)
      throw ValidationError("duplicate net id " + std::to_string(c.netId));
    if (c.cuboids.empty())
      throw ValidationError("net " + std::to_string(c.netId) + " has no cuboids");
    for (const auto& b : c.cuboids)
      if (!b.valid())
        throw ValidationError("net " + std::to_string(c.netId) + " has a degenerate cuboid");
    for (size_t a = 0; a < c.cuboids.size(); ++a)
      for (size_t b = a + 1; b < c.cuboids.size(); ++b)
        if (interiorsOverlap(c.cuboids[a], c.cuboids[b]))
          throw ValidationError("net " + std::to_string(c.netId) +
                                " cuboids overlap (cells must be interior-disjoint)");
  }
  for (size_t i = 0; i < conductors.size(); ++i)
    for (size_t j = i + 1; j < conductors.size(); ++j)
      for (const auto& a : conductors[i].cuboids)
        for (const auto& b : conductors[j].cuboids) {
          if (interiorsOverlap(a, b))
            throw ValidationError("nets " + std::to_string(conductors[i].netId) + " and " +
                                  std::to_string(conductors[j].netId) + " overlap");
          if (positiveAreaContact(a, b))
            throw ValidationError("nets " + std::to_string(conductors[i].netId) + " and " +
                                  std::to_string(conductors[j].netId) +
                                  " touch with positive contact area (shorted nets)");
        }

  // Every conductor must sit strictly inside exactly one region.
  for (const auto& c : conductors) {
    int owner = -1;
    for (const auto& b : c.cuboids) {
      int reg = -1;
      for (const auto& r : s.regions)
        if (r.box.containsStrict(b)) reg = r.regionId;
      if (reg < 0)
        throw ValidationError("net " + std::to_string(c.netId) +
                              " is not strictly interior to a single dielectric region");
      if (owner < 0) owner = reg;
      if (owner != reg)
        throw ValidationError("net " + std::to_string(c.netId) + " straddles regions " +
                              std::to_string(owner) + " and " + std::to_string(reg));
    }
    s.regionOfNet[c.netId] = owner;
  }
  s.conductors = std::move(conductors);
  return s;
}

// Axis-aligned prism with a symmetric trapezoidal cross-section: width varies
// linearly from widthBottom to widthTop over the height interval, centered at
// widthCenter along widthAxis, extruded over `length` along the third axis.
struct TrapezoidSpec {
  int heightAxis = 2;
  int widthAxis = 0;
  Span height;
  double widthBottom = 1.0;
  double widthTop = 1.0;
  double widthCenter = 0.0;
  Span length;
};

// Staircase approximation: slabCount equal-height slabs, each a cuboid whose
// width is the cross-section width at the slab's mid-height. Adjacent slabs
// share exact plane coordinates, so the cells form a valid conductor union.
inline std::vector<Cuboid> approximate_trapezoid(const TrapezoidSpec& t, int slabCount) {
  if (t.heightAxis < 0 || t.heightAxis > 2 || t.widthAxis < 0 || t.widthAxis > 2 ||
      t.heightAxis == t.widthAxis)
    throw ValidationError("trapezoid axes must be distinct members of {0,1,2}");
  if (!t.height.valid() || !t.length.valid())
    throw ValidationError("trapezoid height and length spans must have positive length");
  if (!(t.widthBottom > 0.0) || !(t.widthTop > 0.0))
    throw ValidationError("trapezoid widths must be positive");
  if (slabCount < 1) throw ValidationError("trapezoid slab count must be >= 1");

  int lengthAxis = 3 - t.heightAxis - t.widthAxis;
  double H = t.height.length();
  std::vector<Cuboid> cells;
  cells.reserve(static_cast<size_t>(slabCount));
  for (int i = 0; i < slabCount; ++i) {
    double z0 = (i == 0) ? t.height.lo : t.height.lo + H * i / slabCount;
    double z1 = (i == slabCount - 1) ? t.height.hi : t.height.lo + H * (i + 1) / slabCount;
    double mid = t.height.lo + H * (i + 0.5) / slabCount;
    double w = t.widthBottom + (t.widthTop - t.widthBottom) * ((mid - t.height.lo) / H);
    Cuboid c;
    c.lo[t.heightAxis] = z0;
    c.hi[t.heightAxis] = z1;
    c.lo[t.widthAxis] = t.widthCenter - 0.5 * w;
    c.hi[t.widthAxis] = t.widthCenter + 0.5 * w;
    c.lo[lengthAxis] = t.length.lo;
    c.hi[lengthAxis] = t.length.hi;
    cells.push_back(c);
  }
  return cells;
}

namespace detail {

using SpanPair = std::array<Span, 2>;

// Subtract covering rectangles from a face footprint. Returns interior-disjoint
// pieces exactly covering whole minus the union of covers. Deterministic
// left/right/bottom/top decomposition order.
inline std::vector<SpanPair> subtractCovers(const SpanPair& whole,
                                            const std::vector<SpanPair>& covers) {
  std::vector<SpanPair> pieces{whole};
  for (const auto& cov : covers) {
    std::vector<SpanPair> next;
    next.reserve(pieces.size() + 3);
    for (const auto& p : pieces) {
      Span oa = intersect(p[0], cov[0]);
      Span ob = intersect(p[1], cov[1]);
      if (!oa.valid() || !ob.valid()) {
        next.push_back(p);
        continue;
      }
      if (p[0].lo < oa.lo) next.push_back({Span{p[0].lo, oa.lo}, p[1]});
      if (oa.hi < p[0].hi) next.push_back({Span{oa.hi, p[0].hi}, p[1]});
      if (p[1].lo < ob.lo) next.push_back({oa, Span{p[1].lo, ob.lo}});
      if (ob.hi < p[1].hi) next.push_back({oa, Span{ob.hi, p[1].hi}});
    }
    pieces = std::move(next);
  }
  return pieces;
}

}  // namespace detail

// Emits every boundary face of the scene: exposed conductor faces (cell faces
// minus same-net cover), outer domain faces per region, and region interfaces
// (emitted once per pair, from the smaller region id, normal A -> B).
inline std::vector<BoundaryFace> extract_faces(const Scene& s) {
  std::vector<BoundaryFace> out;

  for (const auto& cond : s.conductors) {
    int reg = s.regionOfNet.at(cond.netId);
    for (const auto& cell : cond.cuboids) {
      for (int axis = 0; axis < 3; ++axis) {
        auto ip = inplaneAxes(axis);
        for (int side = 0; side < 2; ++side) {
          bool hiSide = side == 1;
          double level = hiSide ? cell.hi[axis] : cell.lo[axis];
          detail::SpanPair fp{cell.extent(ip[0]), cell.extent(ip[1])};
          std::vector<detail::SpanPair> covers;
          for (const auto& other : cond.cuboids) {
            if (&other == &cell) continue;
            double touch = hiSide ? other.lo[axis] : other.hi[axis];
            if (touch != level) continue;
            detail::SpanPair cfp{other.extent(ip[0]), other.extent(ip[1])};
            if (overlapsOpen(fp[0], cfp[0]) && overlapsOpen(fp[1], cfp[1]))
              covers.push_back(cfp);
          }
          for (const auto& piece : detail::subtractCovers(fp, covers)) {
            BoundaryFace f;
            f.rect = Rect{axis, level, piece[0], piece[1], hiSide ? 1 : -1};
            f.kind = FaceKind::ConductorSurface;
            f.netId = cond.netId;
            f.regionA = reg;
            out.push_back(f);
          }
        }
      }
    }
  }

  for (const auto& reg : s.regions) {
    for (int axis = 0; axis < 3; ++axis) {
      auto ip = inplaneAxes(axis);
      for (int side = 0; side < 2; ++side) {
        bool hiSide = side == 1;
        double level = hiSide ? reg.box.hi[axis] : reg.box.lo[axis];
        double domLevel = hiSide ? s.domainBox.hi[axis] : s.domainBox.lo[axis];
        detail::SpanPair fp{reg.box.extent(ip[0]), reg.box.extent(ip[1])};
        if (level == domLevel) {
          BoundaryFace f;
          // Outer normals point into the domain.
          f.rect = Rect{axis, level, fp[0], fp[1], hiSide ? -1 : 1};
          int idx = outerFaceIndex(axis, hiSide);
          f.kind = s.outerBC[idx] == OuterBC::Dirichlet ? FaceKind::DirichletOuter
                                                        : FaceKind::NeumannOuter;
          f.regionA = reg.regionId;
          out.push_back(f);
          continue;
        }
        for (const auto& nb : s.regions) {
          if (nb.regionId <= reg.regionId) continue;
          double nbLevel = hiSide ? nb.box.lo[axis] : nb.box.hi[axis];
          if (nbLevel != level) continue;
          Span oa = intersect(fp[0], nb.box.extent(ip[0]));
          Span ob = intersect(fp[1], nb.box.extent(ip[1]));
          if (!oa.valid() || !ob.valid()) continue;
          BoundaryFace f;
          // Interface normal points from the lower region id into the higher.
          f.rect = Rect{axis, level, oa, ob, hiSide ? 1 : -1};
          f.kind = FaceKind::Interface;
          f.regionA = reg.regionId;
          f.regionB = nb.regionId;
          out.push_back(f);
        }
      }
    }
  }
  return out;
}

}  // namespace gbem
