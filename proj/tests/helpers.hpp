#pragma once

#include <array>

#include "gbem/geometry.hpp"

namespace gbemtest {

inline constexpr std::array<gbem::OuterBC, 6> kAllDirichlet{
    gbem::OuterBC::Dirichlet, gbem::OuterBC::Dirichlet, gbem::OuterBC::Dirichlet,
    gbem::OuterBC::Dirichlet, gbem::OuterBC::Dirichlet, gbem::OuterBC::Dirichlet};

// Two crossing bus bars in a grounded box, the workhorse benchmark scene.
inline gbem::Scene makeBench() {
  using namespace gbem;
  Cuboid domain{{-20, -20, 0}, {20, 20, 10}};
  std::vector<DielectricRegion> regions{{1, domain, 1.0}};
  std::vector<Conductor> conductors{
      {1, {Cuboid{{-2, -0.5, 1}, {2, 0.5, 2}}}},
      {2, {Cuboid{{-0.5, -2, 3}, {0.5, 2, 4}}}},
  };
  return build_scene(domain, std::move(regions), std::move(conductors), kAllDirichlet);
}

// Same conductors split across two stacked dielectric layers.
inline gbem::Scene makeTwoLayer(double epsBottom = 3.9, double epsTop = 1.0) {
  using namespace gbem;
  Cuboid domain{{-20, -20, 0}, {20, 20, 10}};
  std::vector<DielectricRegion> regions{
      {1, Cuboid{{-20, -20, 0}, {20, 20, 2.5}}, epsBottom},
      {2, Cuboid{{-20, -20, 2.5}, {20, 20, 10}}, epsTop},
  };
  std::vector<Conductor> conductors{
      {1, {Cuboid{{-2, -0.5, 1}, {2, 0.5, 2}}}},
      {2, {Cuboid{{-0.5, -2, 3}, {0.5, 2, 4}}}},
  };
  return build_scene(domain, std::move(regions), std::move(conductors), kAllDirichlet);
}

// Small instance of the same layout for quick multi-region solves.
inline gbem::Scene makeMiniTwoLayer(double epsBottom, double epsTop) {
  using namespace gbem;
  Cuboid domain{{-4, -4, 0}, {4, 4, 4}};
  std::vector<DielectricRegion> regions{
      {1, Cuboid{{-4, -4, 0}, {4, 4, 2}}, epsBottom},
      {2, Cuboid{{-4, -4, 2}, {4, 4, 4}}, epsTop},
  };
  std::vector<Conductor> conductors{
      {1, {Cuboid{{-0.5, -0.5, 0.5}, {0.5, 0.5, 1.5}}}},
  };
  return build_scene(domain, std::move(regions), std::move(conductors), kAllDirichlet);
}

}  // namespace gbemtest
