#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "hopfharm/mesh.hpp"

namespace hopfharm {

// Minimal static SVG scene: polygons, mesh fills colored by a scalar,
// polylines, and dots, in math coordinates (y flipped at write time).
class SvgScene {
 public:
  explicit SvgScene(double width_px = 760) : width_px_(width_px) {}

  void add_polygon(const std::vector<Point2>& poly, const std::string& stroke = "#1a1a1a",
                   double stroke_width = 1.5, const std::string& fill = "none") {
    Item it;
    it.kind = Kind::polygon;
    it.pts = poly;
    it.stroke = stroke;
    it.fill = fill;
    it.stroke_width = stroke_width;
    push(it);
  }

  void add_polyline(const std::vector<Point2>& pts, const std::string& stroke = "#c0392b",
                    double stroke_width = 1.2) {
    Item it;
    it.kind = Kind::polyline;
    it.pts = pts;
    it.stroke = stroke;
    it.stroke_width = stroke_width;
    push(it);
  }

  void add_dot(Point2 p, const std::string& fill = "#c0392b", double radius = 2.5) {
    Item it;
    it.kind = Kind::dot;
    it.pts = {p};
    it.fill = fill;
    it.stroke_width = radius;
    push(it);
  }

  // Triangles filled on a white-to-blue ramp by `value`, NaN drawn gray.
  // Vertices may come from the mesh itself or from a map's image.
  void add_mesh_field(const TriangleMesh& m, const std::vector<double>& value,
                      const std::vector<Point2>* positions = nullptr) {
    require(value.size() == m.triangles.size(), "svg: one value per triangle expected");
    const std::vector<Point2>& vs = positions ? *positions : m.vertices;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : value)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    if (!(hi > lo)) {
      lo = 0;
      hi = 1;
    }
    for (size_t t = 0; t < m.triangles.size(); ++t) {
      Item it;
      it.kind = Kind::polygon;
      for (int k = 0; k < 3; ++k) it.pts.push_back(vs[m.triangles[t][k]]);
      it.fill = std::isfinite(value[t]) ? ramp((value[t] - lo) / (hi - lo)) : "#bbbbbb";
      it.stroke = it.fill;
      it.stroke_width = 0.3;
      push(it);
    }
  }

  void write(const std::string& path) const {
    require(!items_.empty(), "svg: empty scene");
    double w = xmax_ - xmin_, h = ymax_ - ymin_;
    double pad = 0.04 * std::max(w, h);
    double scale = width_px_ / (w + 2 * pad);
    double height_px = (h + 2 * pad) * scale;
    auto X = [&](double x) { return (x - xmin_ + pad) * scale; };
    auto Y = [&](double y) { return height_px - (y - ymin_ + pad) * scale; };

    std::ofstream out(path);
    require(bool(out), "cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px_ << "\" height=\""
        << height_px << "\" viewBox=\"0 0 " << width_px_ << " " << height_px << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& it : items_) {
      if (it.kind == Kind::dot) {
        out << "<circle cx=\"" << X(it.pts[0].real()) << "\" cy=\"" << Y(it.pts[0].imag())
            << "\" r=\"" << it.stroke_width << "\" fill=\"" << it.fill << "\"/>\n";
        continue;
      }
      out << (it.kind == Kind::polygon ? "<polygon" : "<polyline") << " points=\"";
      for (const auto& p : it.pts) out << X(p.real()) << "," << Y(p.imag()) << " ";
      out << "\" fill=\"" << (it.kind == Kind::polygon ? it.fill : "none") << "\" stroke=\""
          << it.stroke << "\" stroke-width=\"" << it.stroke_width << "\"/>\n";
    }
    out << "</svg>\n";
    require(bool(out), "write failed: " + path);
  }

 private:
  enum class Kind { polygon, polyline, dot };
  struct Item {
    Kind kind = Kind::polygon;
    std::vector<Point2> pts;
    std::string stroke = "#1a1a1a";
    std::string fill = "none";
    double stroke_width = 1.0;
  };

  static std::string ramp(double u) {
    u = std::clamp(u, 0.0, 1.0);
    int r = int(245 - 190 * u), g = int(247 - 130 * u), b = int(250 - 60 * u);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
  }

  void push(const Item& it) {
    for (const auto& p : it.pts) {
      xmin_ = std::min(xmin_, p.real());
      xmax_ = std::max(xmax_, p.real());
      ymin_ = std::min(ymin_, p.imag());
      ymax_ = std::max(ymax_, p.imag());
    }
    items_.push_back(it);
  }

  double width_px_;
  double xmin_ = std::numeric_limits<double>::infinity(), xmax_ = -xmin_;
  double ymin_ = xmin_, ymax_ = -xmin_;
  std::vector<Item> items_;
};

}  // namespace hopfharm
