#pragma once

#include "hopfharm/geometry.hpp"

namespace hopfharm {

// Boundary correspondence: knots (s_k, w_k) with s the arclength along the
// source boundary, piecewise-linear in between, periodic with period
// total_length.
struct BoundaryMap {
  std::vector<double> s;
  std::vector<cplx> w;
  double total_length = 0;

  cplx eval(double at) const {
    size_t n = s.size();
    double t = std::fmod(at, total_length);
    if (t < 0) t += total_length;
    // first knot with s > t, wrapping around the closing interval
    size_t hi = std::upper_bound(s.begin(), s.end(), t) - s.begin();
    size_t lo = (hi + n - 1) % n;
    double s_lo = s[lo], s_hi = hi == n ? s[0] + total_length : s[hi];
    if (hi == 0) {  // t before the first knot: closing interval shifted back
      s_lo = s[n - 1] - total_length;
      s_hi = s[0];
      lo = n - 1;
    }
    double span = s_hi - s_lo;
    double u = span > 0 ? (t - s_lo) / span : 0.0;
    return w[lo] + u * (w[hi % n] - w[lo]);
  }
};

inline void validate_boundary_map(const BoundaryMap& g) {
  require(g.s.size() == g.w.size() && g.s.size() >= 3, "boundary map: needs >= 3 knots");
  require(std::isfinite(g.total_length) && g.total_length > 0,
          "boundary map: total length must be positive");
  require(g.s.front() >= 0 && g.s.back() < g.total_length, "boundary map: knots out of range");
  for (size_t i = 0; i + 1 < g.s.size(); ++i)
    require(g.s[i] < g.s[i + 1], "boundary map: knots must be strictly increasing");
  for (auto& v : g.w)
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), "boundary map: non-finite value");
}

// Trace of given values along a polygon boundary, knots at the vertices.
inline BoundaryMap boundary_map_from_polygon(const std::vector<Point2>& poly,
                                             const std::vector<cplx>& values) {
  require(poly.size() == values.size(), "boundary map: size mismatch");
  BoundaryMap g;
  double acc = 0;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    g.s.push_back(acc);
    g.w.push_back(values[i]);
    acc += std::abs(poly[(i + 1) % n] - poly[i]);
  }
  g.total_length = acc;
  return g;
}

// Discrete Douglas double integral over the unit circle at N uniform
// nodes: sum of |w_i - w_j|^2 / |xi_i - xi_j|^2 weighted by (2pi/N)^2,
// skipping the diagonal band |i-j| <= 1 (circularly).
inline double douglas_integral(const BoundaryMap& g, int N) {
  require(N >= 16, "douglas integral: N must be at least 16");
  std::vector<cplx> xi(N), w(N);
  for (int k = 0; k < N; ++k) {
    double th = 2.0 * kPi * k / N;
    xi[k] = {std::cos(th), std::sin(th)};
    w[k] = g.eval(g.total_length * k / N);
  }
  double weight = sqr(2.0 * kPi / N);
  KahanSum sum;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 2; j < N; ++j) {
      if (i == 0 && j == N - 1) continue;  // circular neighbors
      sum.add(std::norm(w[i] - w[j]) / std::norm(xi[i] - xi[j]));
    }
  }
  return 2.0 * weight * sum.value();  // both orderings of each pair
}

struct DouglasScan {
  std::vector<int> N;
  std::vector<double> value;
  std::vector<double> ratio;  // value[k+1]/value[k]
  bool divergence_flag;       // last ratio exceeds 1.5
};

inline DouglasScan douglas_scan(const BoundaryMap& g, std::vector<int> Ns = {256, 1024, 4096}) {
  require(Ns.size() >= 2, "douglas scan: need at least two resolutions");
  DouglasScan out;
  out.N = Ns;
  for (int n : Ns) out.value.push_back(douglas_integral(g, n));
  for (size_t k = 0; k + 1 < out.value.size(); ++k)
    out.ratio.push_back(out.value[k + 1] / out.value[k]);
  out.divergence_flag = out.ratio.back() > 1.5;
  return out;
}

}  // namespace hopfharm
