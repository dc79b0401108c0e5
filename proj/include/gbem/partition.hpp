#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "gbem/errors.hpp"
#include "gbem/geometry.hpp"

namespace gbem {

struct PartitionParams {
  double p1 = 1.5;  // near-field panel area cap, um^2
  double p2 = 4.0;  // back-face relaxation multiplier, >= 1
  double p3 = 1.0;  // far-field growth multiplier
  double p5 = 1.0;  // near-field reach, um
  double expDirichlet = 3.0;
  double expInterfaceNeumann = 2.0;
  double aspectCap = 4.0;

  void validate() const {
    if (!(p1 > 0) || !(p2 >= 1) || !(p3 > 0) || !(p5 > 0) ||
        !(expDirichlet > 0) || !(expInterfaceNeumann > 0) || !(aspectCap > 0))
      throw ValidationError(
          "partition params must be strictly positive with p2 >= 1");
  }
};

enum class Facing { OnMainNet, Facing, Back };

struct Panel {
  Rect rect;
  FaceKind kind = FaceKind::ConductorSurface;
  int netId = -1;
  int regionA = -1;
  int regionB = -1;
  double area = 0.0;
  double distToMain = 0.0;
  Facing facing = Facing::Facing;
};

struct PanelSet {
  std::vector<Panel> panels;
  int mainNetId = -1;
  // offsets of the contiguous classes, in panel order:
  // [conductor, dirichlet outer, neumann outer, interface, end]
  std::array<std::size_t, 5> classOffset{};
  // panel indices on each region's boundary; interface panels appear twice
  std::map<int, std::vector<std::size_t>> regionPanels;

  std::size_t count(FaceKind k) const {
    auto i = static_cast<std::size_t>(k);
    return classOffset[i + 1] - classOffset[i];
  }
};

inline Facing classify_face(const Rect& rect, const Conductor& mainNet) {
  auto ip = inplaneAxes(rect.axis);
  for (const auto& c : mainNet.cuboids) {
    if (rect.level != c.lo[rect.axis] && rect.level != c.hi[rect.axis]) continue;
    if (rect.spanA.lo >= c.lo[ip[0]] && rect.spanA.hi <= c.hi[ip[0]] &&
        rect.spanB.lo >= c.lo[ip[1]] && rect.spanB.hi <= c.hi[ip[1]])
      return Facing::OnMainNet;
  }
  Cuboid bb = mainNet.cuboids.front();
  for (const auto& c : mainNet.cuboids)
    for (int a = 0; a < 3; ++a) {
      bb.lo[a] = std::min(bb.lo[a], c.lo[a]);
      bb.hi[a] = std::max(bb.hi[a], c.hi[a]);
    }
  double side = (bb.center()[rect.axis] - rect.level) * rect.normalSign;
  return side > 0 ? Facing::Facing : Facing::Back;
}

inline double max_area(FaceKind kind, Facing facing, double d,
                       const PartitionParams& p) {
  double p4 = facing == Facing::Back ? p.p1 * p.p2 : p.p1;
  if (d <= p.p5) return p4;
  bool steep = kind == FaceKind::ConductorSurface || kind == FaceKind::DirichletOuter;
  double e = steep ? p.expDirichlet : p.expInterfaceNeumann;
  return p4 * p.p3 * std::pow(d / p.p5, e);
}

namespace partition_detail {

// Uniform grid of one strip; per-side counts from ceil(side/sqrt(bound)) keep
// every cell under the area cap, then the longer cell side is split further
// until the aspect cap holds. Shared edges are exact.
inline void gridStrip(const Rect& proto, Span sa, Span sb, double maxArea,
                      double aspectCap, std::vector<Rect>& out) {
  double wa = sa.length(), wb = sb.length();
  if (!(wa > 0.0) || !(wb > 0.0)) return;
  double s = std::sqrt(maxArea);
  auto sideCount = [](double w, double cell) {
    double n = std::ceil(w / cell - 1e-12);
    return std::max<long long>(1, static_cast<long long>(n));
  };
  long long na = sideCount(wa, s), nb = sideCount(wb, s);
  const double slack = 1.0 + 1e-12;
  auto cellA = [&] { return wa / static_cast<double>(na); };
  auto cellB = [&] { return wb / static_cast<double>(nb); };
  auto guard = [&] {
    if (na > 2000000 || nb > 2000000 || na * nb > 8000000)
      throw ValidationError("partition bound too small: cell limit exceeded");
  };
  guard();
  while (cellA() * cellB() > maxArea * slack) {
    (cellA() >= cellB() ? na : nb) += 1;
    guard();
  }
  while (std::max(cellA(), cellB()) > aspectCap * std::min(cellA(), cellB()) * slack) {
    (cellA() >= cellB() ? na : nb) += 1;
    guard();
  }
  for (long long ia = 0; ia < na; ++ia) {
    double a0 = sa.lo + wa * static_cast<double>(ia) / static_cast<double>(na);
    double a1 = ia + 1 == na
                    ? sa.hi
                    : sa.lo + wa * static_cast<double>(ia + 1) / static_cast<double>(na);
    for (long long ib = 0; ib < nb; ++ib) {
      double b0 = sb.lo + wb * static_cast<double>(ib) / static_cast<double>(nb);
      double b1 = ib + 1 == nb
                      ? sb.hi
                      : sb.lo + wb * static_cast<double>(ib + 1) / static_cast<double>(nb);
      Rect c = proto;
      c.spanA = Span{a0, a1};
      c.spanB = Span{b0, b1};
      out.push_back(c);
    }
  }
}

inline Span clampSpan(Span s, Span lim) {
  double lo = std::min(std::max(s.lo, lim.lo), lim.hi);
  double hi = std::max(std::min(s.hi, lim.hi), lim.lo);
  return {std::min(lo, hi), std::max(lo, hi)};
}

// Expand by delta, snapping to the face edge when the leftover border would be
// thinner than the step (avoids sliver strips at the rim).
inline Span expandSpan(Span cur, Span lim, double delta) {
  double lo = cur.lo - delta, hi = cur.hi + delta;
  if (lo - lim.lo < delta) lo = lim.lo;
  if (lim.hi - hi < delta) hi = lim.hi;
  return {std::max(lo, lim.lo), std::min(hi, lim.hi)};
}

}  // namespace partition_detail

// Distance-graded banding: a core strip over the main net's footprint, then
// concentric rings whose width doubles each step; every strip is gridded
// uniformly against the bound at its own nearest distance to the main net.
template <class BoundFn>
std::vector<Panel> partition_face(const BoundaryFace& face, const Conductor& mainNet,
                                  BoundFn bound, const PartitionParams& params) {
  using namespace partition_detail;
  const Rect& r = face.rect;
  auto ip = inplaneAxes(r.axis);

  Cuboid bb = mainNet.cuboids.front();
  for (const auto& c : mainNet.cuboids)
    for (int a = 0; a < 3; ++a) {
      bb.lo[a] = std::min(bb.lo[a], c.lo[a]);
      bb.hi[a] = std::max(bb.hi[a], c.hi[a]);
    }
  Span projA = clampSpan({bb.lo[ip[0]], bb.hi[ip[0]]}, r.spanA);
  Span projB = clampSpan({bb.lo[ip[1]], bb.hi[ip[1]]}, r.spanB);

  double step0 = std::max(params.p5, face_distance(r, mainNet));

  std::vector<Panel> out;
  auto emit = [&](Span sa, Span sb) {
    if (!(sa.length() > 0.0) || !(sb.length() > 0.0)) return;
    Rect strip = r;
    strip.spanA = sa;
    strip.spanB = sb;
    double amax = bound(face_distance(strip, mainNet));
    std::vector<Rect> cells;
    gridStrip(r, sa, sb, amax, params.aspectCap, cells);
    for (const auto& c : cells) {
      Panel pn;
      pn.rect = c;
      pn.kind = face.kind;
      pn.netId = face.netId;
      pn.regionA = face.regionA;
      pn.regionB = face.regionB;
      pn.area = c.area();
      pn.distToMain = face_distance(c, mainNet);
      out.push_back(pn);
    }
  };

  Span curA = expandSpan(projA, r.spanA, step0);
  Span curB = expandSpan(projB, r.spanB, step0);
  emit(curA, curB);
  double delta = step0;
  while (!(curA == r.spanA) || !(curB == r.spanB)) {
    delta *= 2.0;
    Span nxtA = expandSpan(curA, r.spanA, delta);
    Span nxtB = expandSpan(curB, r.spanB, delta);
    emit(nxtA, Span{nxtB.lo, curB.lo});
    emit(nxtA, Span{curB.hi, nxtB.hi});
    emit(Span{nxtA.lo, curA.lo}, curB);
    emit(Span{curA.hi, nxtA.hi}, curB);
    curA = nxtA;
    curB = nxtB;
  }
  return out;
}

inline PanelSet partition_scene(const Scene& scene, int mainNetId,
                                const PartitionParams& params) {
  params.validate();
  const Conductor* mainNet = scene.netById(mainNetId);
  if (!mainNet) throw ValidationError("unknown main net id");

  auto classIdx = [](FaceKind k) { return static_cast<std::size_t>(k); };
  std::array<std::vector<Panel>, 4> byClass;
  for (const auto& face : extract_faces(scene)) {
    Facing facing = classify_face(face.rect, *mainNet);
    auto boundFn = [&](double d) { return max_area(face.kind, facing, d, params); };
    for (Panel& pn : partition_face(face, *mainNet, boundFn, params)) {
      pn.facing = facing;
      byClass[classIdx(face.kind)].push_back(pn);
    }
  }

  PanelSet ps;
  ps.mainNetId = mainNetId;
  ps.classOffset[0] = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    for (const auto& pn : byClass[k]) ps.panels.push_back(pn);
    ps.classOffset[k + 1] = ps.panels.size();
  }
  for (const auto& reg : scene.regions) ps.regionPanels[reg.regionId];
  for (std::size_t i = 0; i < ps.panels.size(); ++i) {
    const Panel& pn = ps.panels[i];
    ps.regionPanels.at(pn.regionA).push_back(i);
    if (pn.kind == FaceKind::Interface) ps.regionPanels.at(pn.regionB).push_back(i);
  }
  return ps;
}

}  // namespace gbem
