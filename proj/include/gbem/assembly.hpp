#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "gbem/errors.hpp"
#include "gbem/geometry.hpp"
#include "gbem/kernels.hpp"
#include "gbem/partition.hpp"

namespace gbem {

// Single-dielectric first-kind system: A is the area-normalized single-layer
// Galerkin matrix, symmetric positive definite; unknowns are X = q|I|.
struct GalerkinSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  bool allConverged = true;
};

// Multi-region (and collocation) system over mixed unknowns. qCol/uCol map
// each panel to the column of its flux unknown X = q|I| (q region-outward on
// the lower-region side for interfaces) and its potential unknown; -1 when
// that quantity is known data instead.
struct BlockSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  bool allConverged = true;
  std::vector<std::ptrdiff_t> qCol, uCol;
  std::vector<std::pair<int, std::size_t>> rowPanel;  // row -> (regionId, panel index)
};

namespace assembly_detail {

// Sign turning a panel's stored normal into the region-outward normal.
inline double sideSign(const Panel& p, int regionId) {
  if (p.kind == FaceKind::Interface) return p.regionA == regionId ? 1.0 : -1.0;
  return -1.0;
}

inline double knownPotential(const Panel& p, int mainNetId) {
  return p.kind == FaceKind::ConductorSurface && p.netId == mainNetId ? 1.0 : 0.0;
}

struct UnknownMap {
  std::vector<std::ptrdiff_t> qCol, uCol;
  std::size_t cols = 0;
};

inline UnknownMap buildUnknownMap(const PanelSet& ps) {
  UnknownMap um;
  const std::size_t n = ps.panels.size();
  const std::size_t o3 = ps.classOffset[3];
  um.qCol.assign(n, -1);
  um.uCol.assign(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    switch (ps.panels[p].kind) {
      case FaceKind::ConductorSurface:
      case FaceKind::DirichletOuter:
        um.qCol[p] = static_cast<std::ptrdiff_t>(p);
        break;
      case FaceKind::NeumannOuter:
        um.uCol[p] = static_cast<std::ptrdiff_t>(p);
        break;
      case FaceKind::Interface: {
        std::size_t t = p - o3;
        um.uCol[p] = static_cast<std::ptrdiff_t>(o3 + 2 * t);
        um.qCol[p] = static_cast<std::ptrdiff_t>(o3 + 2 * t + 1);
        break;
      }
    }
  }
  um.cols = o3 + 2 * (ps.classOffset[4] - o3);
  return um;
}

}  // namespace assembly_detail

// First-kind Galerkin assembly for a single dielectric region with an entirely
// Dirichlet outer boundary: A[i][j] = U_ij/(|I_i||I_j|), b in {0,1}.
inline GalerkinSystem assemble_single(const PanelSet& ps,
                                      const QuadratureConfig& cfg = {}) {
  const auto& P = ps.panels;
  if (ps.count(FaceKind::NeumannOuter) != 0 || ps.count(FaceKind::Interface) != 0)
    throw ValidationError(
        "single-dielectric assembly requires one region with an all-Dirichlet boundary");
  const std::size_t n = P.size();
  GalerkinSystem sys;
  sys.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  sys.b.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    sys.b(static_cast<Eigen::Index>(i)) =
        assembly_detail::knownPotential(P[i], ps.mainNetId);
    for (std::size_t j = i; j < n; ++j) {
      KernelValue kv = u_pair_integral(P[i].rect, P[j].rect, cfg);
      if (!kv.converged) sys.allConverged = false;
      double a = kv.value / (P[i].area * P[j].area);
      sys.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a;
      sys.A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = a;
    }
  }
  return sys;
}

// Direct block formulation over all regions. One row per (region, boundary
// panel): (1/2)u_i + (1/|I_i|) sum_k Q_ik u_k - (1/|I_i|) sum_j U_ij q_j = 0,
// with region-outward normals; interface flux eliminated on the higher-region
// side through flux continuity q_B = -(eps_A/eps_B) q_A.
inline BlockSystem assemble_multi(const Scene& scene, const PanelSet& ps,
                                  const QuadratureConfig& cfg = {}) {
  using namespace assembly_detail;
  const auto& P = ps.panels;
  if (ps.count(FaceKind::ConductorSurface) == 0 && ps.count(FaceKind::DirichletOuter) == 0)
    throw ValidationError("no Dirichlet constraint anywhere in the scene (singular problem)");

  UnknownMap um = buildUnknownMap(ps);
  std::size_t rows = 0;
  for (const auto& [regId, list] : ps.regionPanels) rows += list.size();
  if (rows != um.cols) throw NumericalError("block system is not square");

  BlockSystem sys;
  sys.qCol = um.qCol;
  sys.uCol = um.uCol;
  sys.rowPanel.reserve(rows);
  const auto m = static_cast<Eigen::Index>(um.cols);
  sys.A = Eigen::MatrixXd::Zero(m, m);
  sys.b = Eigen::VectorXd::Zero(m);

  Eigen::Index row = 0;
  for (const auto& [regId, list] : ps.regionPanels) {
    const DielectricRegion* reg = scene.regionById(regId);
    if (!reg) throw ValidationError("panel references unknown region");
    const std::size_t nl = list.size();
    for (std::size_t a = 0; a < nl; ++a) sys.rowPanel.emplace_back(regId, list[a]);

    // local single-layer block is symmetric; double-layer is not
    Eigen::MatrixXd Uloc(nl, nl), Qloc(nl, nl);
    for (std::size_t a = 0; a < nl; ++a)
      for (std::size_t c = a; c < nl; ++c) {
        KernelValue kv = u_pair_integral(P[list[a]].rect, P[list[c]].rect, cfg);
        if (!kv.converged) sys.allConverged = false;
        Uloc(a, c) = kv.value;
        Uloc(c, a) = kv.value;
      }
    for (std::size_t a = 0; a < nl; ++a)
      for (std::size_t c = 0; c < nl; ++c) {
        KernelValue kv = q_pair_integral(P[list[a]].rect, P[list[c]].rect, cfg);
        if (!kv.converged) sys.allConverged = false;
        Qloc(a, c) = kv.value * sideSign(P[list[c]], regId);
      }

    for (std::size_t a = 0; a < nl; ++a, ++row) {
      const Panel& pi = P[list[a]];
      for (std::size_t c = 0; c < nl; ++c) {
        const Panel& pk = P[list[c]];
        std::size_t gk = list[c];
        double coefU = Qloc(a, c) / pi.area + (list[a] == gk ? 0.5 : 0.0);
        if (um.uCol[gk] >= 0) {
          sys.A(row, um.uCol[gk]) += coefU;
        } else {
          sys.b(row) -= coefU * knownPotential(pk, ps.mainNetId);
        }
        if (pk.kind == FaceKind::NeumannOuter) continue;  // q known zero
        double coefX = -Uloc(a, c) / (pi.area * pk.area);
        if (pk.kind == FaceKind::Interface && pk.regionB == regId) {
          const DielectricRegion* ra = scene.regionById(pk.regionA);
          coefX *= -(ra->relPermittivity / reg->relPermittivity);
        }
        sys.A(row, um.qCol[gk]) += coefX;
      }
    }
  }
  return sys;
}

// Point-collocation variant of the block formulation, tested at panel
// centroids with the closed-form point kernels; same unknown layout.
inline BlockSystem assemble_collocation(const Scene& scene, const PanelSet& ps) {
  using namespace assembly_detail;
  const auto& P = ps.panels;
  if (ps.count(FaceKind::ConductorSurface) == 0 && ps.count(FaceKind::DirichletOuter) == 0)
    throw ValidationError("no Dirichlet constraint anywhere in the scene (singular problem)");

  UnknownMap um = buildUnknownMap(ps);
  std::size_t rows = 0;
  for (const auto& [regId, list] : ps.regionPanels) rows += list.size();
  if (rows != um.cols) throw NumericalError("block system is not square");

  BlockSystem sys;
  sys.qCol = um.qCol;
  sys.uCol = um.uCol;
  sys.rowPanel.reserve(rows);
  const auto m = static_cast<Eigen::Index>(um.cols);
  sys.A = Eigen::MatrixXd::Zero(m, m);
  sys.b = Eigen::VectorXd::Zero(m);

  Eigen::Index row = 0;
  for (const auto& [regId, list] : ps.regionPanels) {
    const DielectricRegion* reg = scene.regionById(regId);
    if (!reg) throw ValidationError("panel references unknown region");
    for (std::size_t a = 0; a < list.size(); ++a, ++row) {
      sys.rowPanel.emplace_back(regId, list[a]);
      const Panel& pi = P[list[a]];
      Vec3 x = pi.rect.center();
      for (std::size_t c = 0; c < list.size(); ++c) {
        const Panel& pk = P[list[c]];
        std::size_t gk = list[c];
        double coefU = q_point_rect(x, pk.rect) * sideSign(pk, regId) +
                       (list[a] == gk ? 0.5 : 0.0);
        if (um.uCol[gk] >= 0) {
          sys.A(row, um.uCol[gk]) += coefU;
        } else {
          sys.b(row) -= coefU * knownPotential(pk, ps.mainNetId);
        }
        if (pk.kind == FaceKind::NeumannOuter) continue;
        double coefX = -u_point_rect(x, pk.rect) / pk.area;
        if (pk.kind == FaceKind::Interface && pk.regionB == regId) {
          const DielectricRegion* ra = scene.regionById(pk.regionA);
          coefX *= -(ra->relPermittivity / reg->relPermittivity);
        }
        sys.A(row, um.qCol[gk]) += coefX;
      }
    }
  }
  return sys;
}

}  // namespace gbem
