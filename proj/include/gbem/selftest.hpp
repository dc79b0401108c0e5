#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "gbem/geometry.hpp"
#include "gbem/kernels.hpp"
#include "gbem/oracle.hpp"

namespace gbem {

struct SelftestCase {
  std::string name;
  int pairs = 0;
  double worstRel = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct SelftestReport {
  std::vector<SelftestCase> cases;
  bool pass = true;
};

namespace selftest_detail {

// Aitken extrapolation of three successive oracle depths; falls back to the
// finest value when the difference quotient degenerates.
inline double aitken(double v0, double v1, double v2) {
  double d1 = v1 - v0, d2 = v2 - v1;
  double den = d2 - d1;
  if (std::abs(den) < 1e-14 * std::max(std::abs(v2), 1e-300)) return v2;
  return v2 - d2 * d2 / den;
}

// Touching/self pairs: extrapolated oracle over depths {3,4,5}. Disjoint
// pairs: raw depth 6.
inline double oracleTouching(KernelKind kind, const Rect& a, const Rect& b) {
  double v0 = oracle_pair_integral(kind, a, b, 3);
  double v1 = oracle_pair_integral(kind, a, b, 4);
  double v2 = oracle_pair_integral(kind, a, b, 5);
  return aitken(v0, v1, v2);
}

inline double oracleDisjoint(KernelKind kind, const Rect& a, const Rect& b) {
  return oracle_pair_integral(kind, a, b, 6);
}

// Denominator floor guards measure-zero cancellation configurations where the
// true integral is ~0 at O(1) panel scale; both evaluators are absolutely
// accurate well below it.
inline double relErr(double val, double ref) {
  return std::abs(val - ref) / std::max(std::abs(ref), 1e-9);
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(unsigned long long seed) : rng(seed) {}

  double uni(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  double gauss() { return std::normal_distribution<double>(0.0, 1.0)(rng); }
  int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }
  bool coin() { return (rng() & 1u) != 0; }

  Span rspan() {
    double a = uni(-2.0, 2.0);
    double w = uni(0.3, 2.0);
    return {a, a + w};
  }

  Rect coplanarBase(int axis, double lv) {
    return Rect{axis, lv, rspan(), rspan(), coin() ? 1 : -1};
  }

  // Coplanar pair with a strictly positive in-plane gap.
  std::array<Rect, 2> copDisjoint() {
    int axis = pick(3);
    double lv = gauss();
    for (;;) {
      Rect a = coplanarBase(axis, lv), b = coplanarBase(axis, lv);
      double g0 = std::max(b.spanA.lo - a.spanA.hi, a.spanA.lo - b.spanA.hi);
      double g1 = std::max(b.spanB.lo - a.spanB.hi, a.spanB.lo - b.spanB.hi);
      if (std::max(g0, g1) > 0.05) return {a, b};
    }
  }

  // Coplanar pair sharing a grid line (edge- or corner-touching).
  std::array<Rect, 2> copAdjacent() {
    int axis = pick(3);
    double lv = gauss();
    Rect a = coplanarBase(axis, lv);
    Rect b = coplanarBase(axis, lv);
    bool alongA = coin();
    bool hiSide = coin();
    double w = uni(0.3, 2.0);
    Span& s = alongA ? b.spanA : b.spanB;
    const Span& ref = alongA ? a.spanA : a.spanB;
    s = hiSide ? Span{ref.hi, ref.hi + w} : Span{ref.lo - w, ref.lo};
    return {a, b};
  }

  std::array<Rect, 2> copIdentical() {
    Rect a = coplanarBase(pick(3), gauss());
    return {a, a};
  }

  std::array<Rect, 2> parOffset() {
    int axis = pick(3);
    double lv = gauss();
    double off = uni(0.3, 2.0) * (coin() ? 1.0 : -1.0);
    Rect a = coplanarBase(axis, lv);
    Rect b = coplanarBase(axis, lv + off);
    return {a, b};
  }

  std::array<Rect, 2> orthDisjoint() {
    for (;;) {
      int ax1 = pick(3);
      int ax2 = (ax1 + 1 + pick(2)) % 3;
      Rect a = coplanarBase(ax1, gauss());
      Rect b = coplanarBase(ax2, gauss());
      if (rectDistance(a, b) > 0.05) return {a, b};
    }
  }

  // Orthogonal panels meeting along the line x[ax1]=lv1, x[ax2]=lv2; each
  // panel extends to one side of the other's plane.
  std::array<Rect, 2> orthAdjacent() {
    int ax1 = pick(3);
    int ax2 = (ax1 + 1 + pick(2)) % 3;
    int shared = 3 - ax1 - ax2;
    double lv1 = gauss(), lv2 = gauss();
    double w1 = uni(0.3, 2.0), w2 = uni(0.3, 2.0);
    Span ext1 = coin() ? Span{lv2, lv2 + w1} : Span{lv2 - w1, lv2};
    Span ext2 = coin() ? Span{lv1, lv1 + w2} : Span{lv1 - w2, lv1};
    auto mk = [&](int axis, double lv, Span sharedSpan, Span extSpan) {
      auto ip = inplaneAxes(axis);
      Rect r;
      r.axis = axis;
      r.level = lv;
      r.normalSign = coin() ? 1 : -1;
      if (ip[0] == shared) {
        r.spanA = sharedSpan;
        r.spanB = extSpan;
      } else {
        r.spanA = extSpan;
        r.spanB = sharedSpan;
      }
      return r;
    };
    Rect a = mk(ax1, lv1, rspan(), ext1);
    Rect b = mk(ax2, lv2, rspan(), ext2);
    return {a, b};
  }
};

template <class MakePair, class Evaluate>
SelftestCase runCase(const std::string& name, int pairs, double tol, Gen& gen,
                     MakePair makePair, Evaluate evaluate) {
  SelftestCase c;
  c.name = name;
  c.pairs = pairs;
  c.tol = tol;
  for (int t = 0; t < pairs; ++t) {
    auto pr = makePair(gen);
    double rel = evaluate(pr[0], pr[1]);
    if (rel > c.worstRel) c.worstRel = rel;
  }
  c.pass = c.worstRel <= tol;
  return c;
}

}  // namespace selftest_detail

// Randomized agreement audit of the semi-analytic pair evaluators against the
// brute-force oracle, per geometric case class. Disjoint classes must agree to
// 1e-6 relative, touching/self classes to 1e-3.
inline SelftestReport run_selftest(int pairsPerCase, std::ostream& log,
                                   const QuadratureConfig& cfg = {}) {
  using namespace selftest_detail;
  Gen gen(20260817ull);
  SelftestReport rep;

  auto evalU = [&](bool touching) {
    return [&, touching](const Rect& a, const Rect& b) {
      double semi = u_pair_integral(a, b, cfg).value;
      double orc = touching ? oracleTouching(KernelKind::SingleLayer, a, b)
                            : oracleDisjoint(KernelKind::SingleLayer, a, b);
      return relErr(semi, orc);
    };
  };
  auto evalQ = [&](bool touching) {
    return [&, touching](const Rect& a, const Rect& b) {
      double semi = q_pair_integral(a, b, cfg).value;
      double orc = touching ? oracleTouching(KernelKind::DoubleLayer, a, b)
                            : oracleDisjoint(KernelKind::DoubleLayer, a, b);
      return relErr(semi, orc);
    };
  };

  const double tolDisjoint = 1e-6, tolTouch = 1e-3;
  std::vector<SelftestCase> cases;
  cases.push_back(runCase("U coplanar disjoint", pairsPerCase, tolDisjoint, gen,
                          [](Gen& g) { return g.copDisjoint(); }, evalU(false)));
  cases.push_back(runCase("U coplanar adjacent", pairsPerCase, tolTouch, gen,
                          [](Gen& g) { return g.copAdjacent(); }, evalU(true)));
  cases.push_back(runCase("U coplanar identical", pairsPerCase, tolTouch, gen,
                          [](Gen& g) { return g.copIdentical(); }, evalU(true)));
  cases.push_back(runCase("U parallel offset", pairsPerCase, tolDisjoint, gen,
                          [](Gen& g) { return g.parOffset(); }, evalU(false)));
  cases.push_back(runCase("U orthogonal disjoint", pairsPerCase, tolDisjoint, gen,
                          [](Gen& g) { return g.orthDisjoint(); }, evalU(false)));
  cases.push_back(runCase("U orthogonal adjacent", pairsPerCase, tolTouch, gen,
                          [](Gen& g) { return g.orthAdjacent(); }, evalU(true)));
  cases.push_back(runCase("Q coplanar zero", pairsPerCase, 1e-12, gen,
                          [](Gen& g) { return g.copAdjacent(); },
                          [&](const Rect& a, const Rect& b) {
                            double semi = q_pair_integral(a, b, cfg).value;
                            double orc =
                                oracle_pair_integral(KernelKind::DoubleLayer, a, b, 3);
                            return std::abs(semi) + std::abs(orc);
                          }));
  cases.push_back(runCase("Q parallel offset", pairsPerCase, tolDisjoint, gen,
                          [](Gen& g) { return g.parOffset(); }, evalQ(false)));
  cases.push_back(runCase("Q orthogonal disjoint", pairsPerCase, tolDisjoint, gen,
                          [](Gen& g) { return g.orthDisjoint(); }, evalQ(false)));
  cases.push_back(runCase("Q orthogonal adjacent", pairsPerCase, tolTouch, gen,
                          [](Gen& g) { return g.orthAdjacent(); }, evalQ(true)));

  rep.cases = std::move(cases);
  for (const auto& c : rep.cases) {
    if (!c.pass) rep.pass = false;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-24s pairs=%-5d worst_rel=%.3e tol=%.0e  %s",
                  c.name.c_str(), c.pairs, c.worstRel, c.tol, c.pass ? "PASS" : "FAIL");
    log << buf << "\n";
  }
  return rep;
}

}  // namespace gbem
