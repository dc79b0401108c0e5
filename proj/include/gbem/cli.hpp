#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbem/model_io.hpp"

namespace gbem {

// Command-line driver. Exit codes: 0 success, 1 input/validation error,
// 2 numerical failure. Kept out of gbem.hpp so library consumers do not
// inherit the vendored argument parser.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Galerkin boundary-element capacitance extraction"};
  app.require_subcommand(1);

  auto* ext = app.add_subcommand("extract", "Extract a capacitance row or matrix");
  std::string inPath, outPath, format = "csv", baseline, dumpPath;
  int netId = -1;
  bool all = false;
  double p1 = -1, p2 = -1, p3 = -1, p5 = -1;
  ext->add_option("--input", inPath, "scene file")->required();
  auto* optNet = ext->add_option("--net", netId, "main net id (one matrix row)");
  ext->add_flag("--all", all, "solve every net (full matrix); the default");
  ext->add_option("--p1", p1, "near-field panel area cap override");
  ext->add_option("--p2", p2, "back-face multiplier override");
  ext->add_option("--p3", p3, "far-field multiplier override");
  ext->add_option("--p5", p5, "near-field reach override");
  ext->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  ext->add_option("--output", outPath, "write the report here instead of stdout");
  ext->add_option("--baseline", baseline, "alternative formulation")
      ->check(CLI::IsMember({"collocation"}));
  ext->add_option("--dump-matrix", dumpPath,
                  "binary dump of the assembled system matrix (per net: suffix _net<id>)");

  auto* val = app.add_subcommand("validate", "Parse and geometry-check a scene file");
  std::string valPath;
  val->add_option("--input", valPath, "scene file")->required();

  auto* ker = app.add_subcommand("kernels", "Kernel utilities");
  ker->require_subcommand(1);
  auto* self = ker->add_subcommand("selftest", "Randomized kernel-vs-oracle audit");
  int pairs = 500;
  self->add_option("--pairs", pairs, "pairs per geometric case")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (val->parsed()) {
      ParsedModel pm = parse_model(io_detail::readFile(valPath));
      auto faces = extract_faces(pm.scene);
      std::cout << "ok: " << pm.scene.conductors.size() << " nets, "
                << pm.scene.regions.size() << " regions, " << faces.size()
                << " boundary faces\n";
      return 0;
    }
    if (self->parsed()) {
      SelftestReport rep = run_selftest(pairs, std::cout);
      if (!rep.pass) {
        std::cerr << "selftest failed: kernel/oracle disagreement above threshold\n";
        return 2;
      }
      return 0;
    }
    if (ext->parsed()) {
      if (all && optNet->count() > 0)
        throw ValidationError("--net and --all are mutually exclusive");
      ParsedModel pm = parse_model(io_detail::readFile(inPath));
      if (p1 > 0) pm.params.p1 = p1;
      if (p2 > 0) pm.params.p2 = p2;
      if (p3 > 0) pm.params.p3 = p3;
      if (p5 > 0) pm.params.p5 = p5;
      pm.params.validate();

      ExtractionOptions opts;
      opts.baselineCollocation = baseline == "collocation";
      opts.dumpMatrixPath = dumpPath;

      RunReport rep;
      rep.params = pm.params;
      rep.baseline = baseline;
      for (const auto& c : pm.scene.conductors) rep.netIds.push_back(c.netId);
      std::sort(rep.netIds.begin(), rep.netIds.end());

      if (optNet->count() > 0) {
        ExtractionOptions rowOpts = opts;
        if (!dumpPath.empty()) rowOpts.dumpMatrixPath = dumpPath;
        rep.rows.push_back(capacitance_row(pm.scene, netId, pm.params, rowOpts));
      } else {
        CapacitanceMatrix cm = capacitance_matrix(pm.scene, pm.params, opts);
        rep.rows = std::move(cm.rows);
        rep.reciprocityDefect = cm.reciprocityDefect;
      }

      std::string text = format == "json" ? to_json(rep) : to_csv(rep);
      if (outPath.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(outPath, std::ios::binary);
        if (!f) throw ValidationError("cannot open output file: " + outPath);
        f << text;
      }
      return 0;
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace gbem
