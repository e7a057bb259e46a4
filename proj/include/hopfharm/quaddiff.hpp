#pragma once

#include <Eigen/Eigenvalues>

#include <optional>

#include "hopfharm/hopf.hpp"

namespace hopfharm {

// Quadratic differential phi dz^2 on a Jordan domain, either a complex
// polynomial in z or a per-vertex interpolant of a sampled Hopf product.
class QuadDifferential {
 public:
  static QuadDifferential polynomial(std::vector<cplx> coeffs, JordanDomain domain) {
    QuadDifferential q;
    while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    require(!coeffs.empty(), "quad differential: empty coefficient list");
    q.coeffs_ = std::move(coeffs);
    q.domain_ = std::move(domain);
    return q;
  }

  // Vertex-averaged interpolant of a per-triangle field: each vertex takes
  // the area-weighted mean of its incident triangles, evaluation is
  // barycentric. The domain is the meshed region.
  static QuadDifferential sampled(const HopfField& field, JordanDomain domain) {
    QuadDifferential q;
    q.domain_ = std::move(domain);
    const TriangleMesh& m = *field.mesh;
    std::vector<cplx> acc(m.vertices.size(), cplx{0, 0});
    std::vector<double> wsum(m.vertices.size(), 0.0);
    for (size_t t = 0; t < m.triangles.size(); ++t)
      for (int v : m.triangles[t]) {
        acc[v] += field.area[t] * field.phi[t];
        wsum[v] += field.area[t];
      }
    auto values = std::make_shared<MeshMap>();
    values->mesh = field.mesh;
    values->values.resize(m.vertices.size());
    for (size_t v = 0; v < m.vertices.size(); ++v) {
      require(wsum[v] > 0, "quad differential: isolated vertex");
      values->values[v] = acc[v] / wsum[v];
    }
    q.samples_ = values;
    q.locator_ = std::make_shared<MeshLocator>(field.mesh);
    return q;
  }

  bool is_polynomial() const { return !coeffs_.empty(); }
  const JordanDomain& domain() const { return domain_; }
  const std::vector<cplx>& coefficients() const { return coeffs_; }

  cplx eval(Point2 z) const {
    if (is_polynomial()) {
      cplx acc{0, 0};
      for (size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
      return acc;
    }
    return interpolate(*samples_, *locator_, z);
  }

  // Negated copy: vertical trajectories of -phi are horizontal ones of phi.
  QuadDifferential negated() const {
    QuadDifferential q(*this);
    if (is_polynomial())
      for (auto& c : q.coeffs_) c = -c;
    else {
      auto flipped = std::make_shared<MeshMap>(*samples_);
      for (auto& v : flipped->values) v = -v;
      q.samples_ = flipped;
    }
    return q;
  }

  // Roots of the polynomial lying inside the domain (closure excluded by
  // the point-location tolerance). Polynomial representation only.
  std::vector<cplx> critical_points() const {
    require(is_polynomial(), "critical points: sampled differentials are not supported");
    size_t deg = coeffs_.size() - 1;
    std::vector<cplx> inside;
    if (deg == 0) {
      require(std::abs(coeffs_[0]) > 0, "critical points: identically zero differential");
      return inside;
    }
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (size_t k = 0; k < deg; ++k) {
      companion(k, deg - 1) = -coeffs_[k] / coeffs_[deg];
      if (k + 1 < deg) companion(k + 1, k) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    require(es.info() == Eigen::Success, "critical points: eigensolver failed");
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      cplx r = es.eigenvalues()[k];
      if (contains_point(domain_, r)) inside.push_back(r);
    }
    return inside;
  }

 private:
  std::vector<cplx> coeffs_;
  JordanDomain domain_;
  std::shared_ptr<MeshMap> samples_;
  std::shared_ptr<MeshLocator> locator_;
};

// Unit tangent of the vertical foliation at a point: tau with
// tau^2 * phi < 0, i.e. tau = unit sqrt(-phi). `prev` selects the branch
// continuing an ongoing trace; without it the canonical representative
// (upper half plane, positive real axis on ties) is returned. Returns
// nothing where |phi| is below tol (critical point).
inline std::optional<cplx> vertical_direction(cplx phi, std::optional<cplx> prev = {},
                                              double tol = 1e-14) {
  double mag = std::abs(phi);
  if (mag < tol) return std::nullopt;
  cplx tau = std::sqrt(-phi);
  tau /= std::abs(tau);
  if (prev) {
    if (dot(*prev, tau) < 0) tau = -tau;
  } else if (tau.imag() < 0 || (std::abs(tau.imag()) < 1e-15 && tau.real() < 0)) {
    tau = -tau;
  }
  return tau;
}

enum class TraceEnd { boundary, critical, step_limit };

inline const char* to_string(TraceEnd e) {
  switch (e) {
    case TraceEnd::boundary: return "boundary";
    case TraceEnd::critical: return "critical";
    default: return "step_limit";
  }
}

// Polyline trace of the vertical trajectory through a point, with the
// phi-length accumulated by per-step Simpson quadrature of sqrt|phi|.
struct TraceResult {
  std::vector<Point2> points;  // backward end ... z0 ... forward end
  double phi_length = 0;
  TraceEnd forward_end = TraceEnd::step_limit;
  TraceEnd backward_end = TraceEnd::step_limit;
};

struct TraceOptions {
  double step = 1e-2;
  int max_steps = 200000;          // per direction
  double critical_tol = 1e-7;     // |phi| below this is a critical hit
  int max_halvings = 6;           // step ladder near critical points
};

namespace detail {

struct HalfTrace {
  std::vector<Point2> points;  // excludes the seed
  double phi_length = 0;
  TraceEnd end = TraceEnd::step_limit;
};

// One RK4 step of z' = tau(z) with branch continuity along the stages.
inline std::optional<cplx> rk4_step(const QuadDifferential& q, Point2 z, cplx prev, double s,
                                    double tol, cplx& out) {
  auto dir = [&](Point2 at, cplx near) -> std::optional<cplx> {
    return vertical_direction(q.eval(at), near, tol);
  };
  auto k1 = dir(z, prev);
  if (!k1) return std::nullopt;
  auto k2 = dir(z + 0.5 * s * *k1, *k1);
  if (!k2) return std::nullopt;
  auto k3 = dir(z + 0.5 * s * *k2, *k2);
  if (!k3) return std::nullopt;
  auto k4 = dir(z + s * *k3, *k3);
  if (!k4) return std::nullopt;
  out = z + s / 6.0 * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
  return *k1;
}

inline HalfTrace trace_one_direction(const QuadDifferential& q, Point2 z0, cplx tau0,
                                     const TraceOptions& opt) {
  HalfTrace out;
  const JordanDomain& dom = q.domain();
  const double floor_step = opt.step / std::ldexp(1.0, opt.max_halvings);
  Point2 z = z0;
  cplx prev = tau0;
  KahanSum length;
  auto sphi = [&](Point2 at) { return std::sqrt(std::abs(q.eval(at))); };
  for (int step = 0; step < opt.max_steps; ++step) {
    cplx phi = q.eval(z);
    double mag = std::abs(phi);
    if (mag < opt.critical_tol) {
      out.end = TraceEnd::critical;
      break;
    }
    // Stop on the boundary once closer than the step floor; the clamp
    // below keeps every RK4 stage strictly inside until then.
    auto proj = project_to_boundary(dom, z);
    if (proj.distance < floor_step) {
      length.add(proj.distance * 0.5 * (sphi(z) + sphi(proj.point)));
      out.points.push_back(proj.point);
      out.end = TraceEnd::boundary;
      break;
    }
    // Distance to the nearest zero of phi, estimated from a directional
    // difference quotient; it clamps the step so approaches to critical
    // points are resolved instead of overshot.
    double delta = 0.01 * opt.step;
    double grad = std::abs(q.eval(z + delta * prev) - phi) / delta;
    double d_est = grad > 1e-12 ? mag / grad : std::numeric_limits<double>::infinity();
    if (d_est < floor_step) {
      out.end = TraceEnd::critical;
      break;
    }
    double s = std::min({opt.step, std::max(0.25 * d_est, floor_step),
                         std::max(0.5 * proj.distance, floor_step)});
    Point2 znew;
    auto used = rk4_step(q, z, prev, s, opt.critical_tol, znew);
    if (!used) {
      out.end = TraceEnd::critical;
      break;
    }
    Point2 zmid;
    if (!rk4_step(q, z, prev, 0.5 * s, opt.critical_tol, zmid)) zmid = 0.5 * (z + znew);
    length.add(s / 6.0 * (sphi(z) + 4.0 * sphi(zmid) + sphi(znew)));
    prev = *used;
    // Advance the branch to the arrival direction for the next step.
    auto arrive = vertical_direction(q.eval(znew), prev, opt.critical_tol);
    if (arrive) prev = *arrive;
    z = znew;
    out.points.push_back(z);
  }
  out.phi_length = length.value();
  return out;
}

}  // namespace detail

inline TraceResult trace_vertical(const QuadDifferential& q, Point2 z0,
                                  const TraceOptions& opt = {}) {
  require(locate_point(q.domain(), z0) == PointLocation::inside,
          "trace: seed must be strictly inside the domain");
  auto tau = vertical_direction(q.eval(z0), {}, opt.critical_tol);
  require(tau.has_value(), "trace: seed is a critical point");
  detail::HalfTrace fwd = detail::trace_one_direction(q, z0, *tau, opt);
  detail::HalfTrace bwd = detail::trace_one_direction(q, z0, -*tau, opt);
  TraceResult r;
  r.points.reserve(bwd.points.size() + fwd.points.size() + 1);
  for (size_t i = bwd.points.size(); i-- > 0;) r.points.push_back(bwd.points[i]);
  r.points.push_back(z0);
  for (auto& p : fwd.points) r.points.push_back(p);
  r.phi_length = fwd.phi_length + bwd.phi_length;
  r.forward_end = fwd.end;
  r.backward_end = bwd.end;
  return r;
}

inline TraceResult trace_horizontal(const QuadDifferential& q, Point2 z0,
                                    const TraceOptions& opt = {}) {
  return trace_vertical(q.negated(), z0, opt);
}

// phi-length of a polyline, composite Simpson on each segment. Fails if a
// quadrature node leaves the domain (nonconvex domains).
inline std::optional<double> polyline_phi_length(const QuadDifferential& q,
                                                 const std::vector<Point2>& pts,
                                                 int intervals_per_segment = 64) {
  KahanSum acc;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Point2 a = pts[i], b = pts[i + 1];
    double len = std::abs(b - a);
    int n = intervals_per_segment;
    for (int k = 0; k <= 2 * n; ++k) {
      Point2 p = a + (b - a) * (double(k) / (2 * n));
      if (locate_point(q.domain(), p) == PointLocation::outside) return std::nullopt;
      double w = (k == 0 || k == 2 * n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc.add(w * std::sqrt(std::abs(q.eval(p))) * (len / n) / 6.0);
    }
  }
  return acc.value();
}

// Compares the traced trajectory's phi-length against random competitor
// polylines with the same endpoints. Vertical trajectories minimize the
// phi-length locally, so the trace should never lose by more than the
// quadrature tolerance.
struct MinimalityReport {
  double trajectory_length = 0;
  double best_competitor = std::numeric_limits<double>::infinity();
  int competitors = 0;
  bool minimal = false;
};

inline MinimalityReport minimal_length_check(const QuadDifferential& q, const TraceResult& traj,
                                         Rng& rng, int competitors = 40,
                                         double rel_tol = 1e-4) {
  require(traj.points.size() >= 2, "minimality: trajectory too short");
  Point2 A = traj.points.front(), B = traj.points.back();
  Point2 lo = q.domain().boundary[0], hi = lo;
  for (auto& p : q.domain().boundary) {
    lo = {std::min(lo.real(), p.real()), std::min(lo.imag(), p.imag())};
    hi = {std::max(hi.real(), p.real()), std::max(hi.imag(), p.imag())};
  }
  MinimalityReport rep;
  rep.trajectory_length = traj.phi_length;
  int attempts = 0;
  while (rep.competitors < competitors && attempts < competitors * 200) {
    ++attempts;
    int waypoints = rng.uniform_int(1, 3);
    std::vector<Point2> path{A};
    for (int w = 0; w < waypoints; ++w)
      path.push_back({rng.uniform(lo.real(), hi.real()), rng.uniform(lo.imag(), hi.imag())});
    path.push_back(B);
    auto len = polyline_phi_length(q, path);
    if (!len) continue;
    rep.best_competitor = std::min(rep.best_competitor, *len);
    ++rep.competitors;
  }
  rep.minimal = rep.trajectory_length <=
                rep.best_competitor * (1.0 + rel_tol) + rel_tol * rep.trajectory_length;
  return rep;
}

// Maximum spread of a mesh map along a traced polyline; fibers of a
// monotone map lie in vertical trajectories, so the spread over a fiber
// trajectory stays at interpolation-error scale.
inline double map_spread_on_polyline(const MeshMap& f, const MeshLocator& loc,
                                     const std::vector<Point2>& pts) {
  require(!pts.empty(), "map spread: empty polyline");
  double worst = 0;
  cplx base = interpolate(f, loc, pts.front());
  for (auto& p : pts) worst = std::max(worst, std::abs(interpolate(f, loc, p) - base));
  return worst;
}

namespace detail {
inline double value_diameter(const std::vector<cplx>& w) {
  double worst = 0;
  for (size_t i = 0; i < w.size(); ++i)
    for (size_t j = i + 1; j < w.size(); ++j) worst = std::max(worst, std::abs(w[i] - w[j]));
  return worst;
}
}  // namespace detail

// Oscillation of a map along a trajectory: the diameter of the sampled
// value set. Arcs squeezed to a point report zero; for an injective map it
// equals the image diameter of the arc.
inline double constancy_on_trajectory(const MeshMap& f, const MeshLocator& loc,
                                      const std::vector<Point2>& pts) {
  require(!pts.empty(), "constancy check: empty trajectory");
  std::vector<cplx> w;
  w.reserve(pts.size());
  for (auto& p : pts) w.push_back(interpolate(f, loc, p));
  return detail::value_diameter(w);
}

inline double constancy_on_trajectory(const std::function<cplx(Point2)>& eval,
                                      const std::vector<Point2>& pts) {
  require(!pts.empty(), "constancy check: empty trajectory");
  std::vector<cplx> w;
  w.reserve(pts.size());
  for (auto& p : pts) w.push_back(eval(p));
  return detail::value_diameter(w);
}

}  // namespace hopfharm
