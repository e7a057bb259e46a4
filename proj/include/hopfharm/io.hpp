#pragma once

#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopfharm/boundary.hpp"
#include "hopfharm/hopf.hpp"
#include "hopfharm/mesh.hpp"

namespace hopfharm {

using json = nlohmann::json;

// ---------------------------------------------------------------------
// JSON round-trips. Points serialize as [x, y] pairs; complex values as
// [re, im]. Every reader validates enough to fail loudly on bad files.
// ---------------------------------------------------------------------

inline json domain_to_json(const JordanDomain& d) {
  json j;
  j["name"] = d.name;
  auto& b = j["boundary"] = json::array();
  for (const auto& p : d.boundary) b.push_back({p.real(), p.imag()});
  return j;
}

inline JordanDomain domain_from_json(const json& j) {
  JordanDomain d;
  d.name = j.value("name", "domain");
  for (const auto& p : j.at("boundary")) d.boundary.emplace_back(p.at(0), p.at(1));
  validate_jordan(d);
  return d;
}

inline json mesh_to_json(const TriangleMesh& m) {
  json j;
  auto& vs = j["vertices"] = json::array();
  for (const auto& p : m.vertices) vs.push_back({p.real(), p.imag()});
  auto& ts = j["triangles"] = json::array();
  for (const auto& t : m.triangles) ts.push_back({t[0], t[1], t[2]});
  j["boundary_loop"] = m.boundary_loop;
  return j;
}

inline TriangleMesh mesh_from_json(const json& j) {
  TriangleMesh m;
  for (const auto& p : j.at("vertices")) m.vertices.emplace_back(p.at(0), p.at(1));
  for (const auto& t : j.at("triangles")) {
    std::array<int, 3> tri{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()};
    for (int v : tri) require(v >= 0 && v < int(m.vertices.size()), "mesh json: vertex id range");
    m.triangles.push_back(tri);
  }
  for (const auto& v : j.at("boundary_loop")) {
    int id = v.get<int>();
    require(id >= 0 && id < int(m.vertices.size()), "mesh json: boundary id range");
    m.boundary_loop.push_back(id);
  }
  require(m.triangles.size() >= 1 && m.boundary_loop.size() >= 3, "mesh json: degenerate mesh");
  return m;
}

inline json map_to_json(const MeshMap& f) {
  json j = mesh_to_json(*f.mesh);
  auto& vs = j["values"] = json::array();
  for (const auto& w : f.values) vs.push_back({w.real(), w.imag()});
  return j;
}

inline MeshMap map_from_json(const json& j) {
  MeshMap f;
  f.mesh = std::make_shared<TriangleMesh>(mesh_from_json(j));
  for (const auto& w : j.at("values")) f.values.emplace_back(w.at(0), w.at(1));
  require(f.values.size() == f.mesh->vertices.size(), "map json: value count mismatch");
  return f;
}

inline json boundary_map_to_json(const BoundaryMap& g) {
  json j;
  j["total_length"] = g.total_length;
  auto& ks = j["knots"] = json::array();
  for (size_t i = 0; i < g.s.size(); ++i) ks.push_back({g.s[i], g.w[i].real(), g.w[i].imag()});
  return j;
}

inline BoundaryMap boundary_map_from_json(const json& j) {
  BoundaryMap g;
  g.total_length = j.at("total_length");
  for (const auto& k : j.at("knots")) {
    g.s.push_back(k.at(0));
    g.w.emplace_back(k.at(1), k.at(2));
  }
  validate_boundary_map(g);
  return g;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require(bool(out), "cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  require(bool(out), "write failed: " + path);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), "cannot open: " + path);
  return json::parse(in);
}

// ---------------------------------------------------------------------
// CSV writers for plotting. Columns are named in a header row; numbers
// are printed with enough digits to round-trip.
// ---------------------------------------------------------------------

namespace detail {
inline void csv_row(std::ostream& out, const std::vector<double>& row) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", row[i]);
    out << buf;
  }
  out << '\n';
}
}  // namespace detail

// Per-triangle Hopf product at the centroid, with the per-vertex residual
// averaged onto the triangle when one is supplied.
inline void write_hopf_csv(const std::string& path, const HopfField& field,
                           const HolomorphyResidual* residual = nullptr) {
  std::ofstream out(path);
  require(bool(out), "cannot open for writing: " + path);
  out << "cx,cy,re_phi,im_phi,abs_phi,residual\n";
  const TriangleMesh& m = *field.mesh;
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    double res = std::numeric_limits<double>::quiet_NaN();
    if (residual) {
      double acc = 0;
      int cnt = 0;
      for (int k = 0; k < 3; ++k) {
        double r = residual->per_vertex[m.triangles[t][k]];
        if (std::isfinite(r)) {
          acc += r;
          ++cnt;
        }
      }
      if (cnt) res = acc / cnt;
    }
    detail::csv_row(out, {field.centroid[t].real(), field.centroid[t].imag(),
                          field.phi[t].real(), field.phi[t].imag(), std::abs(field.phi[t]), res});
  }
  require(bool(out), "write failed: " + path);
}

inline void write_polyline_csv(const std::string& path, const std::vector<Point2>& pts) {
  std::ofstream out(path);
  require(bool(out), "cannot open for writing: " + path);
  out << "x,y\n";
  for (const auto& p : pts) detail::csv_row(out, {p.real(), p.imag()});
  require(bool(out), "write failed: " + path);
}

// ---------------------------------------------------------------------
// Run report: one JSON document per CLI invocation recording what ran,
// with what inputs, and the headline numbers. Schema "hopfharm/1".
// ---------------------------------------------------------------------
struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  json params = json::object();
  json metrics = json::object();
  std::vector<std::string> outputs;
};

inline json run_report_to_json(const RunReport& r) {
  json j;
  j["schema"] = "hopfharm/1";
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["params"] = r.params;
  j["metrics"] = r.metrics;
  j["outputs"] = r.outputs;
  return j;
}

inline void write_run_report(const std::string& path, const RunReport& r) {
  write_json_file(path, run_report_to_json(r));
}

}  // namespace hopfharm
