#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "gbem/assembly.hpp"
#include "gbem/geometry.hpp"
#include "gbem/partition.hpp"
#include "gbem/solver.hpp"

namespace gbem {

inline constexpr double kEps0 = 8.854187817e-12;  // vacuum permittivity, F/m
inline constexpr double kUnitScale = 1e-6;        // file coordinates are um

struct ExtractionOptions {
  bool baselineCollocation = false;  // use the point-collocation formulation
  bool allowLuFallback = false;      // retry a failed Cholesky with LU
  QuadratureConfig quad{};
  std::string dumpMatrixPath;  // when set, dump the assembled system matrix
};

struct RowDiagnostics {
  std::size_t panelCount = 0;
  double seconds = 0.0;  // wall clock around assembly + solve only
  double residualNorm = 0.0;
  double neutralityDefect = -1.0;  // relative to |Q_main|; -1 when not auditable
  std::string method;
  bool allConverged = true;
};

struct CapacitanceRow {
  int mainNetId = -1;
  std::map<int, double> capacitance;  // farads at 1 V: charge per net
  double outerCharge = 0.0;           // induced charge on the Dirichlet boundary
  RowDiagnostics diag;
};

struct CapacitanceMatrix {
  std::vector<int> netIds;
  std::vector<CapacitanceRow> rows;       // one per net, ascending id
  double reciprocityDefect = 0.0;         // max relative |C_mn - C_nm| mismatch
};

// Physical free charge per net: Q = eps_r * eps0 * X * unitScale summed over
// the net's panels, where X = q|I| is the solved flux unknown (region-outward
// normal). Interface panels carry no free charge and Neumann flux is zero.
inline std::map<int, double> net_charges(const Solution& sol, const PanelSet& ps,
                                         const Scene& scene,
                                         const std::vector<std::ptrdiff_t>* qCol = nullptr,
                                         double unitScale = kUnitScale,
                                         double* outerCharge = nullptr) {
  std::map<int, double> out;
  for (const auto& c : scene.conductors) out[c.netId] = 0.0;
  double outer = 0.0;
  for (std::size_t p = 0; p < ps.panels.size(); ++p) {
    const Panel& pn = ps.panels[p];
    if (pn.kind == FaceKind::Interface || pn.kind == FaceKind::NeumannOuter) continue;
    std::ptrdiff_t col = qCol ? (*qCol)[p] : static_cast<std::ptrdiff_t>(p);
    const DielectricRegion* reg = scene.regionById(pn.regionA);
    if (!reg)
      throw ValidationError("missing permittivity for region " +
                            std::to_string(pn.regionA));
    double q = reg->relPermittivity * kEps0 * sol.x(col) * unitScale;
    if (pn.kind == FaceKind::ConductorSurface)
      out[pn.netId] += q;
    else
      outer += q;
  }
  if (outerCharge) *outerCharge = outer;
  return out;
}

namespace extraction_detail {

inline void dump_system_matrix(const std::string& path, const Eigen::MatrixXd& A) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open matrix dump path: " + path);
  auto putLE = [&](std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    f.write(reinterpret_cast<const char*>(buf), 8);
  };
  putLE(static_cast<std::uint64_t>(A.rows()));
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
      double v = A(r, c);
      std::uint64_t bits;
      std::memcpy(&bits, &v, 8);
      putLE(bits);
    }
}

}  // namespace extraction_detail

// One matrix row: main net at 1 V, everything else grounded. The symmetric
// first-kind Galerkin path applies to single-region all-Dirichlet scenes; any
// other scene (or the collocation baseline) goes through the block system.
inline CapacitanceRow capacitance_row(const Scene& scene, int mainNetId,
                                      const PartitionParams& pp = {},
                                      const ExtractionOptions& opts = {}) {
  PanelSet ps = partition_scene(scene, mainNetId, pp);
  bool allDirichlet = true;
  for (auto bc : scene.outerBC)
    if (bc != OuterBC::Dirichlet) allDirichlet = false;
  bool singlePath =
      scene.regions.size() == 1 && allDirichlet && !opts.baselineCollocation;

  CapacitanceRow row;
  row.mainNetId = mainNetId;
  row.diag.panelCount = ps.panels.size();

  Solution sol;
  std::vector<std::ptrdiff_t> qCol;
  bool converged = true;
  auto t0 = std::chrono::steady_clock::now();
  if (singlePath) {
    GalerkinSystem sys = assemble_single(ps, opts.quad);
    converged = sys.allConverged;
    if (!opts.dumpMatrixPath.empty())
      extraction_detail::dump_system_matrix(opts.dumpMatrixPath, sys.A);
    try {
      sol = cholesky_solve(sys.A, sys.b);
    } catch (const NumericalError&) {
      if (!opts.allowLuFallback) throw;
      sol = lu_solve(sys.A, sys.b);
    }
    row.diag.method = "galerkin-single";
  } else {
    BlockSystem sys = opts.baselineCollocation ? assemble_collocation(scene, ps)
                                               : assemble_multi(scene, ps, opts.quad);
    converged = sys.allConverged;
    if (!opts.dumpMatrixPath.empty())
      extraction_detail::dump_system_matrix(opts.dumpMatrixPath, sys.A);
    sol = lu_solve(sys.A, sys.b);
    qCol = std::move(sys.qCol);
    row.diag.method = opts.baselineCollocation ? "collocation" : "galerkin-block";
  }
  auto t1 = std::chrono::steady_clock::now();

  row.diag.seconds = std::chrono::duration<double>(t1 - t0).count();
  row.diag.residualNorm = sol.residualNorm;
  row.diag.allConverged = converged;
  row.capacitance = net_charges(sol, ps, scene, qCol.empty() ? nullptr : &qCol,
                                kUnitScale, &row.outerCharge);
  if (allDirichlet) {
    double total = row.outerCharge;
    for (const auto& [net, q] : row.capacitance) total += q;
    double qMain = std::abs(row.capacitance.at(mainNetId));
    row.diag.neutralityDefect = std::abs(total) / std::max(qMain, 1e-300);
  }
  return row;
}

inline CapacitanceMatrix capacitance_matrix(const Scene& scene,
                                            const PartitionParams& pp = {},
                                            const ExtractionOptions& opts = {}) {
  CapacitanceMatrix cm;
  for (const auto& c : scene.conductors) cm.netIds.push_back(c.netId);
  std::sort(cm.netIds.begin(), cm.netIds.end());
  for (int id : cm.netIds) {
    ExtractionOptions rowOpts = opts;
    if (!opts.dumpMatrixPath.empty())
      rowOpts.dumpMatrixPath = opts.dumpMatrixPath + "_net" + std::to_string(id);
    cm.rows.push_back(capacitance_row(scene, id, pp, rowOpts));
  }
  for (std::size_t a = 0; a < cm.rows.size(); ++a)
    for (std::size_t b = a + 1; b < cm.rows.size(); ++b) {
      double cab = cm.rows[a].capacitance.at(cm.netIds[b]);
      double cba = cm.rows[b].capacitance.at(cm.netIds[a]);
      double den = std::max(std::abs(cab), std::abs(cba));
      if (den > 0)
        cm.reciprocityDefect =
            std::max(cm.reciprocityDefect, std::abs(cab - cba) / den);
    }
  return cm;
}

}  // namespace gbem
