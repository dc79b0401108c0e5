#pragma once

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gbem/errors.hpp"
#include "gbem/extraction.hpp"
#include "gbem/geometry.hpp"
#include "gbem/partition.hpp"
#include "gbem/selftest.hpp"
#include "gbem/version.hpp"

namespace gbem {

struct ParsedModel {
  Scene scene;
  PartitionParams params;
};

namespace io_detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == '#') break;
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline bool startsWith(const std::string& s, const char* p) {
  return s.rfind(p, 0) == 0;
}

inline double parseNum(const std::string& tok, int lineNo, const char* what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos != tok.size() || tok.empty())
    throw ValidationError("line " + std::to_string(lineNo) + ": expected " + what +
                          ", got '" + tok + "'");
  return v;
}

inline int parseId(const std::string& tok, int lineNo, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos != tok.size() || tok.empty())
    throw ValidationError("line " + std::to_string(lineNo) + ": expected " + what +
                          ", got '" + tok + "'");
  return static_cast<int>(v);
}

// One token of the form key(x,y,z), no interior whitespace.
inline Vec3 parsePoint(const std::string& tok, const char* key, int lineNo) {
  std::string prefix = std::string(key) + "(";
  if (!startsWith(tok, prefix.c_str()) || tok.back() != ')')
    throw ValidationError("line " + std::to_string(lineNo) + ": expected " +
                          std::string(key) + "(x,y,z), got '" + tok + "'");
  std::string inner = tok.substr(prefix.size(), tok.size() - prefix.size() - 1);
  Vec3 v{};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t comma = i < 2 ? inner.find(',', start) : inner.size();
    if (comma == std::string::npos)
      throw ValidationError("line " + std::to_string(lineNo) + ": expected " +
                            std::string(key) + "(x,y,z), got '" + tok + "'");
    v[i] = parseNum(inner.substr(start, comma - start), lineNo, "coordinate");
    start = comma + 1;
  }
  return v;
}

inline int faceIndex(const std::string& tok, int lineNo) {
  static const std::map<std::string, int> names = {
      {"-x", 0}, {"+x", 1}, {"-y", 2}, {"+y", 3}, {"-z", 4}, {"+z", 5}};
  auto it = names.find(tok);
  if (it == names.end())
    throw ValidationError("line " + std::to_string(lineNo) +
                          ": expected face in {+x,-x,+y,-y,+z,-z}, got '" + tok + "'");
  return it->second;
}

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string point(const char* key, const Vec3& v) {
  return std::string(key) + "(" + g17(v[0]) + "," + g17(v[1]) + "," + g17(v[2]) + ")";
}

}  // namespace io_detail

// Line-oriented scene format: `domain lo(x,y,z) hi(x,y,z)`, `region <id> <eps>
// lo() hi()`, `net <id> cuboid lo() hi()` (repeatable per id), `bc <face>
// <dirichlet|neumann>` (default dirichlet), `params <p1> <p2> <p3> <p5>`,
// `#` comments. Unknown keys are rejected.
inline ParsedModel parse_model(const std::string& text) {
  using namespace io_detail;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  bool haveDomain = false;
  Cuboid domain;
  std::vector<DielectricRegion> regions;
  std::vector<Conductor> conductors;
  std::map<int, std::size_t> netIndex;
  std::array<OuterBC, 6> bc;
  bc.fill(OuterBC::Dirichlet);
  PartitionParams pp;

  auto err = [&](const std::string& m) -> void {
    throw ValidationError("line " + std::to_string(lineNo) + ": " + m);
  };

  while (std::getline(in, line)) {
    ++lineNo;
    auto t = tokenize(line);
    if (t.empty()) continue;
    const std::string& key = t[0];
    if (key == "domain") {
      if (haveDomain) err("duplicate domain");
      if (t.size() != 3) err("expected: domain lo(x,y,z) hi(x,y,z)");
      domain.lo = parsePoint(t[1], "lo", lineNo);
      domain.hi = parsePoint(t[2], "hi", lineNo);
      haveDomain = true;
    } else if (key == "region") {
      if (t.size() == 4 && startsWith(t[2], "lo("))
        err("region " + t[1] + ": missing permittivity");
      if (t.size() != 5) err("expected: region <id> <eps> lo(x,y,z) hi(x,y,z)");
      DielectricRegion r;
      r.regionId = parseId(t[1], lineNo, "region id");
      if (startsWith(t[2], "lo(")) err("region " + t[1] + ": missing permittivity");
      r.relPermittivity = parseNum(t[2], lineNo, "permittivity");
      r.box.lo = parsePoint(t[3], "lo", lineNo);
      r.box.hi = parsePoint(t[4], "hi", lineNo);
      regions.push_back(r);
    } else if (key == "net") {
      if (t.size() != 5 || t[2] != "cuboid")
        err("expected: net <id> cuboid lo(x,y,z) hi(x,y,z)");
      int id = parseId(t[1], lineNo, "net id");
      Cuboid c;
      c.lo = parsePoint(t[3], "lo", lineNo);
      c.hi = parsePoint(t[4], "hi", lineNo);
      auto it = netIndex.find(id);
      if (it == netIndex.end()) {
        netIndex[id] = conductors.size();
        conductors.push_back(Conductor{id, {c}});
      } else {
        conductors[it->second].cuboids.push_back(c);
      }
    } else if (key == "bc") {
      if (t.size() != 3) err("expected: bc <face> <dirichlet|neumann>");
      int idx = faceIndex(t[1], lineNo);
      if (t[2] == "dirichlet")
        bc[static_cast<std::size_t>(idx)] = OuterBC::Dirichlet;
      else if (t[2] == "neumann")
        bc[static_cast<std::size_t>(idx)] = OuterBC::Neumann;
      else
        err("expected boundary type dirichlet or neumann, got '" + t[2] + "'");
    } else if (key == "params") {
      if (t.size() != 5) err("expected: params <p1> <p2> <p3> <p5>");
      pp.p1 = parseNum(t[1], lineNo, "p1");
      pp.p2 = parseNum(t[2], lineNo, "p2");
      pp.p3 = parseNum(t[3], lineNo, "p3");
      pp.p5 = parseNum(t[4], lineNo, "p5");
    } else {
      err("unknown key '" + key + "'");
    }
  }
  if (!haveDomain) throw ValidationError("scene file has no domain line");
  pp.validate();
  ParsedModel pm{build_scene(domain, regions, conductors, bc), pp};
  return pm;
}

// Canonical dump; parse_model(dump_model(s, p)) reproduces the identical Scene.
inline std::string dump_model(const Scene& s, const PartitionParams& pp) {
  using namespace io_detail;
  std::ostringstream o;
  o << "domain " << point("lo", s.domainBox.lo) << " " << point("hi", s.domainBox.hi)
    << "\n";
  for (const auto& r : s.regions)
    o << "region " << r.regionId << " " << g17(r.relPermittivity) << " "
      << point("lo", r.box.lo) << " " << point("hi", r.box.hi) << "\n";
  for (const auto& c : s.conductors)
    for (const auto& q : c.cuboids)
      o << "net " << c.netId << " cuboid " << point("lo", q.lo) << " "
        << point("hi", q.hi) << "\n";
  static const char* faceNames[6] = {"-x", "+x", "-y", "+y", "-z", "+z"};
  for (int i = 0; i < 6; ++i)
    o << "bc " << faceNames[i] << " "
      << (s.outerBC[static_cast<std::size_t>(i)] == OuterBC::Dirichlet ? "dirichlet"
                                                                       : "neumann")
      << "\n";
  o << "params " << g17(pp.p1) << " " << g17(pp.p2) << " " << g17(pp.p3) << " "
    << g17(pp.p5) << "\n";
  return o.str();
}

struct RunReport {
  std::string version = kVersion;
  PartitionParams params;
  std::vector<int> netIds;           // matrix column ids, ascending
  std::vector<CapacitanceRow> rows;  // solved rows
  double reciprocityDefect = -1.0;   // < 0 when only one row was solved
  std::string baseline;              // "" or "collocation"
};

// CSV: comment header (version, parameter echo, panel counts, methods), then
// the capacitance matrix with net-id headers. Contains no timing fields, so
// repeated runs are byte-identical.
inline std::string to_csv(const RunReport& r) {
  using namespace io_detail;
  std::ostringstream o;
  o << "# gbem " << r.version << "\n";
  o << "# params p1=" << g9(r.params.p1) << " p2=" << g9(r.params.p2)
    << " p3=" << g9(r.params.p3) << " p5=" << g9(r.params.p5) << "\n";
  o << "# panels";
  for (const auto& row : r.rows)
    o << " net" << row.mainNetId << "=" << row.diag.panelCount;
  o << "\n# method";
  for (const auto& row : r.rows) o << " net" << row.mainNetId << "=" << row.diag.method;
  o << "\n";
  o << "net";
  for (int id : r.netIds) o << "," << id;
  o << "\n";
  for (const auto& row : r.rows) {
    o << row.mainNetId;
    for (int id : r.netIds) o << "," << g9(row.capacitance.at(id));
    o << "\n";
  }
  return o.str();
}

// JSON: the full run report including per-row diagnostics and wall times.
inline std::string to_json(const RunReport& r) {
  using namespace io_detail;
  std::ostringstream o;
  o << "{\n";
  o << "  \"tool\": \"gbem\",\n";
  o << "  \"version\": \"" << r.version << "\",\n";
  o << "  \"params\": {\"p1\": " << g9(r.params.p1) << ", \"p2\": " << g9(r.params.p2)
    << ", \"p3\": " << g9(r.params.p3) << ", \"p5\": " << g9(r.params.p5) << "},\n";
  if (!r.baseline.empty()) o << "  \"baseline\": \"" << r.baseline << "\",\n";
  o << "  \"netIds\": [";
  for (std::size_t i = 0; i < r.netIds.size(); ++i)
    o << (i ? ", " : "") << r.netIds[i];
  o << "],\n";
  o << "  \"rows\": [\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    o << "    {\"net\": " << row.mainNetId << ", \"panels\": " << row.diag.panelCount
      << ", \"method\": \"" << row.diag.method << "\""
      << ", \"residual\": " << g9(row.diag.residualNorm)
      << ", \"neutrality\": " << g9(row.diag.neutralityDefect)
      << ", \"outerCharge\": " << g9(row.outerCharge)
      << ", \"seconds\": " << g9(row.diag.seconds) << ", \"capacitance\": {";
    bool first = true;
    for (const auto& [net, c] : row.capacitance) {
      o << (first ? "" : ", ") << "\"" << net << "\": " << g9(c);
      first = false;
    }
    o << "}}" << (i + 1 < r.rows.size() ? "," : "") << "\n";
  }
  o << "  ],\n";
  o << "  \"reciprocityDefect\": " << g9(r.reciprocityDefect) << "\n";
  o << "}\n";
  return o.str();
}

namespace io_detail {

inline std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace io_detail

}  // namespace gbem
