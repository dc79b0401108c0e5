#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gbem/kernels.hpp"

using namespace gbem;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Rect translated(const Rect& r, const Vec3& t) {
  auto ip = inplaneAxes(r.axis);
  return Rect{r.axis,
              r.level + t[r.axis],
              {r.spanA.lo + t[ip[0]], r.spanA.hi + t[ip[0]]},
              {r.spanB.lo + t[ip[1]], r.spanB.hi + t[ip[1]]},
              r.normalSign};
}

// Cyclic world-coordinate permutation x->y->z->x applied to a rect.
Rect permuted(const Rect& r) {
  auto ip = inplaneAxes(r.axis);
  int newAxis = (r.axis + 1) % 3;
  int a0 = (ip[0] + 1) % 3, a1 = (ip[1] + 1) % 3;
  Span s0 = r.spanA, s1 = r.spanB;
  if (a0 > a1) {
    std::swap(a0, a1);
    std::swap(s0, s1);
  }
  return Rect{newAxis, r.level, s0, s1, r.normalSign};
}

// Orthogonal rects whose planes pass through each other's interior while the
// shared-axis spans overlap intersect along a line; scenes never produce that.
bool crossing(const Rect& a, const Rect& b) {
  if (a.axis == b.axis) return false;
  int shared = 3 - a.axis - b.axis;
  Span ea = a.extent(b.axis), eb = b.extent(a.axis);
  return ea.lo < b.level && b.level < ea.hi && eb.lo < a.level && a.level < eb.hi &&
         overlapsOpen(a.extent(shared), b.extent(shared));
}

struct PairGen {
  std::mt19937_64 rng{424242};

  double uni(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  }
  Span rspan() {
    double a = uni(-2, 2);
    return {a, a + uni(0.3, 2)};
  }
  // random pair drawn from the coplanar / parallel-offset / orthogonal classes
  std::pair<Rect, Rect> next() {
    for (;;) {
      int axis = int(rng() % 3);
      int cls = int(rng() % 3);
      Rect a{axis, uni(-1, 1), rspan(), rspan(), rng() % 2 ? 1 : -1};
      Rect b = a;
      b.normalSign = rng() % 2 ? 1 : -1;
      if (cls == 0) {  // coplanar
        b.spanA = rspan();
        b.spanB = rspan();
      } else if (cls == 1) {  // parallel offset
        b.level = a.level + (rng() % 2 ? 1 : -1) * uni(0.3, 2);
        b.spanA = rspan();
        b.spanB = rspan();
      } else {  // orthogonal
        int bAxis = (axis + 1 + int(rng() % 2)) % 3;
        b = Rect{bAxis, uni(-1, 1), rspan(), rspan(), rng() % 2 ? 1 : -1};
      }
      if (!crossing(a, b)) return {a, b};
    }
  }
};

// Plain composite Gauss oracle for the point potential of a unit density.
double pointOracle(const Vec3& x, const Rect& R, int cells) {
  auto ip = inplaneAxes(R.axis);
  double acc = 0.0;
  double wA = R.spanA.length() / cells, wB = R.spanB.length() / cells;
  for (int ia = 0; ia < cells; ++ia)
    for (int ib = 0; ib < cells; ++ib)
      for (int ga = 0; ga < kGaussN; ++ga)
        for (int gb = 0; gb < kGaussN; ++gb) {
          Vec3 y{};
          y[R.axis] = R.level;
          y[ip[0]] = R.spanA.lo + wA * (ia + 0.5 + 0.5 * kGaussX[ga]);
          y[ip[1]] = R.spanB.lo + wB * (ib + 0.5 + 0.5 * kGaussX[gb]);
          double dx = x[0] - y[0], dy = x[1] - y[1], dz = x[2] - y[2];
          double r = std::sqrt(dx * dx + dy * dy + dz * dz);
          acc += 0.25 * wA * wB * kGaussW[ga] * kGaussW[gb] / (kFourPi * r);
        }
  return acc;
}

}  // namespace

TEST_CASE("alternating corner sum") {
  auto id1 = [](const std::vector<double>& a) { return a[0]; };
  CHECK(diff_apply(id1, {{1.0, 0.0}}) == 1.0);

  auto prod = [](const std::vector<double>& a) { return a[0] * a[1]; };
  CHECK(diff_apply(prod, {{1.0, 0.0}, {1.0, 0.0}}) == 1.0);

  auto sinsum = [](const std::vector<double>& a) { return std::sin(a[0] + a[1]); };
  double halfPi = std::asin(1.0);
  CHECK_THAT(diff_apply(sinsum, {{halfPi, 0.0}, {halfPi, 0.0}}), WithinAbs(-2.0, 1e-14));

  auto inv = [](const std::vector<double>& a) { return 1.0 / a[0]; };
  CHECK_THROWS_AS(diff_apply(inv, {{1.0, 0.0}}), NumericalError);
}

TEST_CASE("single-layer pair integral is symmetric") {
  PairGen gen;
  for (int it = 0; it < 100; ++it) {
    auto [a, b] = gen.next();
    double uab = u_pair_integral(a, b).value;
    double uba = u_pair_integral(b, a).value;
    REQUIRE_THAT(uba, WithinRel(uab, 1e-12));
    REQUIRE(uab > 0.0);
  }
}

TEST_CASE("pair integrals are translation and axis-permutation invariant") {
  PairGen gen;
  Vec3 t{5, -3, 2};
  for (int it = 0; it < 40; ++it) {
    auto [a, b] = gen.next();
    double u0 = u_pair_integral(a, b).value;
    CHECK_THAT(u_pair_integral(translated(a, t), translated(b, t)).value,
               WithinRel(u0, 1e-12));
    CHECK_THAT(u_pair_integral(permuted(a), permuted(b)).value, WithinRel(u0, 1e-11));

    double q0 = q_pair_integral(a, b).value;
    double qt = q_pair_integral(translated(a, t), translated(b, t)).value;
    double qp = q_pair_integral(permuted(a), permuted(b)).value;
    CHECK_THAT(qt, WithinAbs(q0, 1e-12 + 1e-11 * std::abs(q0)));
    CHECK_THAT(qp, WithinAbs(q0, 1e-12 + 1e-11 * std::abs(q0)));
  }
}

TEST_CASE("flipping the source normal negates the double-layer integral") {
  PairGen gen;
  for (int it = 0; it < 100; ++it) {
    auto [a, b] = gen.next();
    double q1 = q_pair_integral(a, b).value;
    Rect bf = b;
    bf.normalSign = -b.normalSign;
    double q2 = q_pair_integral(a, bf).value;
    REQUIRE_THAT(q2, WithinAbs(-q1, 1e-12 + 1e-12 * std::abs(q1)));
  }
}

TEST_CASE("coplanar double-layer pairs vanish exactly") {
  Rect a{2, 0.25, {0, 1}, {0, 1}, 1};
  Rect b{2, 0.25, {2, 3}, {-1, 0.5}, -1};
  CHECK(q_pair_integral(a, b).value == 0.0);
  CHECK(q_pair_integral(a, a).value == 0.0);
}

TEST_CASE("single-layer closed forms match frozen references") {
  QuadratureConfig cfg;

  SECTION("coplanar (fully analytic)") {
    Rect sq{2, 0, {0, 1}, {0, 1}, 1};
    CHECK_THAT(u_pair_integral(sq, sq, cfg).value,
               WithinRel(0.2366005022046692, 1e-9));

    Rect rct{0, 1, {0, 2}, {-0.25, 0.25}, 1};
    CHECK_THAT(u_pair_integral(rct, rct, cfg).value,
               WithinRel(0.21169029935491254, 1e-9));

    Rect adjA{2, 0, {0, 1}, {0, 1}, 1};
    Rect adjB{2, 0, {1, 2.3}, {0, 0.7}, 1};
    CHECK_THAT(u_pair_integral(adjA, adjB, cfg).value,
               WithinRel(0.07287312340623026, 1e-9));

    Rect disA{1, -2, {0, 1.5}, {0, 1}, 1};
    Rect disB{1, -2, {2, 3}, {0.5, 2.5}, 1};
    CHECK_THAT(u_pair_integral(disA, disB, cfg).value,
               WithinRel(0.12268222523420745, 1e-9));
  }
  SECTION("parallel offset (reduced to 1-D quadrature)") {
    Rect a{2, 1, {0, 1}, {0, 1}, 1};
    Rect b{2, 0, {0, 1}, {0, 1}, 1};
    CHECK_THAT(u_pair_integral(a, b, cfg).value,
               WithinRel(0.06993383553800263, 1e-6));

    Rect sa{0, 2.5, {-1, 0.5}, {0.3, 1.7}, 1};
    Rect sb{0, 1, {0.2, 2}, {-0.5, 0.9}, 1};
    CHECK_THAT(u_pair_integral(sa, sb, cfg).value,
               WithinRel(0.18994761567034635, 1e-6));
  }
  SECTION("orthogonal (reduced to 1-D quadrature)") {
    Rect a{2, 0, {0, 1}, {0, 1}, 1};
    Rect b{0, 2, {0.5, 1.5}, {1, 2}, 1};
    CHECK_THAT(u_pair_integral(a, b, cfg).value,
               WithinRel(0.03625499787837069, 1e-6));

    Rect e1{2, 0, {0, 1}, {0, 1}, 1};
    Rect e2{1, 0, {0, 1}, {0, 1}, 1};
    CHECK_THAT(u_pair_integral(e1, e2, cfg).value,
               WithinRel(0.10734127519843392, 1e-6));

    Rect t1{2, 0, {0, 2}, {-1, 1}, 1};
    Rect t2{0, 1, {-0.5, 0.5}, {0, 1.5}, 1};
    CHECK_THAT(u_pair_integral(t1, t2, cfg).value,
               WithinRel(0.4790527168879336, 1e-6));
  }
}

TEST_CASE("double-layer closed forms match frozen references") {
  QuadratureConfig cfg;

  Rect pi1{2, 1, {0, 1}, {0, 1}, 1};
  Rect pj1{2, 0, {-0.2, 1.3}, {0.1, 0.8}, 1};
  CHECK_THAT(q_pair_integral(pi1, pj1, cfg).value,
             WithinRel(0.0554151455434669, 1e-6));

  Rect oi{2, 0, {0, 1}, {0, 1}, 1};
  Rect oj{0, 2, {0.5, 1.5}, {1, 2}, -1};
  CHECK_THAT(q_pair_integral(oi, oj, cfg).value,
             WithinRel(0.011324772441013004, 1e-6));

  Rect ei{2, 0, {0, 1}, {0, 1}, 1};
  Rect ej{1, 0, {0, 1}, {0, 1}, 1};
  CHECK_THAT(q_pair_integral(ei, ej, cfg).value,
             WithinRel(0.11113873320194041, 1e-6));

  Rect bi{1, -0.8575535635412491, {0.34410487297464243, 0.9076144923978153},
          {-0.622649673169549, 0.1631672183635413}, 1};
  Rect bj{0, 0.9076144923978153, {-1.6627438264788437, -0.8575535635412491},
          {-0.6769789681037953, 1.073134547946061}, 1};
  CHECK_THAT(q_pair_integral(bi, bj, cfg).value,
             WithinRel(-0.0733166487590698, 1e-6));
}

TEST_CASE("closed forms agree with the subdividing oracle on canonical cases") {
  SECTION("unit square self-integral") {
    Rect sq{2, 0, {0, 1}, {0, 1}, 1};
    double closed = u_pair_integral(sq, sq).value;
    double v3 = oracle_pair_integral(KernelKind::SingleLayer, sq, sq, 3);
    double v4 = oracle_pair_integral(KernelKind::SingleLayer, sq, sq, 4);
    double v5 = oracle_pair_integral(KernelKind::SingleLayer, sq, sq, 5);
    double den = (v5 - v4) - (v4 - v3);
    double orc = std::abs(den) > 0 ? v5 - (v5 - v4) * (v5 - v4) / den : v5;
    CHECK_THAT(closed, WithinRel(orc, 1e-6));
  }
  SECTION("parallel aligned offset 1") {
    Rect a{2, 1, {0, 1}, {0, 1}, 1};
    Rect b{2, 0, {0, 1}, {0, 1}, 1};
    double closed = u_pair_integral(a, b).value;
    double orc = oracle_pair_integral(KernelKind::SingleLayer, a, b, 6);
    CHECK_THAT(closed, WithinRel(orc, 1e-8));
  }
  SECTION("orthogonal edge-sharing double layer") {
    Rect a{2, 0, {0, 1}, {0, 1}, 1};
    Rect b{1, 0, {0, 1}, {0, 1}, 1};
    double closed = q_pair_integral(a, b).value;
    double v3 = oracle_pair_integral(KernelKind::DoubleLayer, a, b, 3);
    double v4 = oracle_pair_integral(KernelKind::DoubleLayer, a, b, 4);
    double v5 = oracle_pair_integral(KernelKind::DoubleLayer, a, b, 5);
    double den = (v5 - v4) - (v4 - v3);
    double orc = std::abs(den) > 0 ? v5 - (v5 - v4) * (v5 - v4) / den : v5;
    CHECK_THAT(closed, WithinRel(orc, 1e-3));
  }
}

TEST_CASE("closed surface identity: double-layer row sums equal -|I|/2") {
  // unit cube, each face split 2x2, outward normals
  std::vector<Rect> panels;
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      double level = side ? 1.0 : 0.0;
      int ns = side ? 1 : -1;
      for (int ia = 0; ia < 2; ++ia)
        for (int ib = 0; ib < 2; ++ib)
          panels.push_back(Rect{axis, level,
                                {0.5 * ia, 0.5 * (ia + 1)},
                                {0.5 * ib, 0.5 * (ib + 1)},
                                ns});
    }
  REQUIRE(panels.size() == 24);
  for (const auto& pi : panels) {
    double s = 0.0;
    for (const auto& pj : panels) s += q_pair_integral(pi, pj).value;
    double target = -0.5 * pi.area();
    REQUIRE_THAT(s, WithinAbs(target, 1e-3 * std::abs(target)));
  }
}

TEST_CASE("pair integrals obey the scale law") {
  auto scale = [](const Rect& r, double s) {
    return Rect{r.axis, r.level * s, {r.spanA.lo * s, r.spanA.hi * s},
                {r.spanB.lo * s, r.spanB.hi * s}, r.normalSign};
  };

  SECTION("coplanar closed form, s^3") {
    Rect a{2, 0, {0, 1}, {0, 1}, 1};
    Rect b{2, 0, {1, 2.3}, {0, 0.7}, 1};
    double base = u_pair_integral(a, b).value;
    double big = u_pair_integral(scale(a, 2), scale(b, 2)).value;
    CHECK_THAT(big, WithinRel(8.0 * base, 1e-12));
  }
  SECTION("quadrature paths, s^3 and s^2") {
    Rect a{2, 1, {0, 1}, {0, 1}, 1};
    Rect b{2, 0, {-0.2, 1.3}, {0.1, 0.8}, 1};
    CHECK_THAT(u_pair_integral(scale(a, 2), scale(b, 2)).value,
               WithinRel(8.0 * u_pair_integral(a, b).value, 1e-7));
    CHECK_THAT(q_pair_integral(scale(a, 2), scale(b, 2)).value,
               WithinRel(4.0 * q_pair_integral(a, b).value, 1e-7));

    Rect c{0, 2, {0.5, 1.5}, {1, 2}, -1};
    CHECK_THAT(u_pair_integral(scale(a, 2), scale(c, 2)).value,
               WithinRel(8.0 * u_pair_integral(a, c).value, 1e-7));
    CHECK_THAT(q_pair_integral(scale(a, 2), scale(c, 2)).value,
               WithinRel(4.0 * q_pair_integral(a, c).value, 1e-7));
  }
}

TEST_CASE("point kernels") {
  SECTION("potential at the center of a unit square") {
    Rect sq{2, 0, {-0.5, 0.5}, {-0.5, 0.5}, 1};
    double exact = std::log(1.0 + std::sqrt(2.0)) / (4.0 * std::atan(1.0));
    CHECK_THAT(u_point_rect({0, 0, 0}, sq), WithinAbs(exact, 1e-12));
  }
  SECTION("potential far field matches a composite Gauss oracle") {
    Rect r{1, 0.5, {0, 1}, {-0.5, 1.5}, 1};
    Vec3 x{3, -2, 4};
    CHECK_THAT(u_point_rect(x, r), WithinAbs(pointOracle(x, r, 4), 1e-12));
    Vec3 near{0.3, 0.8, 0.1};
    CHECK_THAT(u_point_rect(near, r), WithinAbs(pointOracle(near, r, 24), 1e-9));
  }
  SECTION("double-layer point value is the normalized solid angle") {
    Rect sq{2, 0, {-0.5, 0.5}, {-0.5, 0.5}, 1};
    double exact = std::atan(1.0 / (2.0 * std::sqrt(6.0))) / (4.0 * std::atan(1.0));
    CHECK_THAT(q_point_rect({0, 0, 1}, sq), WithinAbs(exact, 1e-12));
  }
  SECTION("in-plane double-layer point value vanishes") {
    Rect sq{2, 0, {0, 1}, {0, 1}, 1};
    CHECK(q_point_rect({5, -2, 0}, sq) == 0.0);
    CHECK(q_point_rect({0.5, 0.5, 0}, sq) == 0.0);
  }
  SECTION("closed-surface point identities") {
    std::vector<Rect> faces;
    for (int axis = 0; axis < 3; ++axis)
      for (int side = 0; side < 2; ++side)
        faces.push_back(Rect{axis, side ? 1.0 : 0.0, {0, 1}, {0, 1}, side ? 1 : -1});

    double inner = 0.0;
    for (const auto& f : faces) inner += q_point_rect({0.5, 0.5, 0.5}, f);
    CHECK_THAT(inner, WithinAbs(-1.0, 1e-12));

    double onFace = 0.0;
    for (const auto& f : faces) onFace += q_point_rect({0.5, 0.5, 1.0}, f);
    CHECK_THAT(onFace, WithinAbs(-0.5, 1e-9));

    double outside = 0.0;
    for (const auto& f : faces) outside += q_point_rect({3, 1, 2}, f);
    CHECK_THAT(outside, WithinAbs(0.0, 1e-12));
  }
}
