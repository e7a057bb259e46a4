// Butterfly showcase: a Lipschitz self-map of the disk whose Hopf product
// is the polynomial -(4+9z)/4. Verifies the product numerically, traces the
// vertical trajectory through 0.5 (the squeezed segment on the real axis),
// and checks its phi-length is minimal among random competitors.

#include <cstdio>

#include "hopfharm/quaddiff.hpp"
#include "hopfharm/svg.hpp"

using namespace hopfharm;

int main() {
  ClosedFormMap m = butterfly_map();
  SamplingRecipe recipe = sampling_recipe(m, 0.03);
  auto mesh = std::make_shared<TriangleMesh>(triangulate(recipe.domain, 0.03, recipe.constraints));
  MeshMap f;
  f.mesh = mesh;
  for (const auto& z : mesh->vertices) f.values.push_back(m.eval(z));

  HopfField field = hopf_product(f);
  double worst = 0;
  for (size_t t = 0; t < field.phi.size(); ++t) {
    cplx exact = -0.25 * (4.0 + 9.0 * field.centroid[t]);
    worst = std::max(worst, std::abs(field.phi[t] - exact));
  }
  std::printf("hopf product vs -(4+9z)/4: max error %.3e over %zu triangles\n", worst,
              field.phi.size());
  std::printf("holomorphy residual: %.3e\n", holomorphy_residual(field).global);

  QuadDifferential q = QuadDifferential::polynomial({{-1.0, 0.0}, {-2.25, 0.0}}, m.domain);
  std::printf("critical point: %.6f (exact -4/9 = %.6f)\n",
              q.critical_points()[0].real(), -4.0 / 9.0);

  TraceResult tr = trace_vertical(q, {0.5, 0.0});
  double exact_len = std::pow(13.0, 1.5) / 27.0;
  std::printf("trajectory through 0.5: %zu points, ends %s/%s\n", tr.points.size(),
              to_string(tr.backward_end), to_string(tr.forward_end));
  std::printf("phi-length %.8f vs exact 13^1.5/27 = %.8f\n", tr.phi_length, exact_len);

  Rng rng(7);
  MinimalityReport mr = minimal_length_check(q, tr, rng, 60);
  std::printf("minimality: trajectory %.6f vs best of %d competitors %.6f -> %s\n",
              mr.trajectory_length, mr.competitors, mr.best_competitor,
              mr.minimal ? "minimal" : "NOT minimal");

  SvgScene svg;
  std::vector<double> absphi(field.phi.size());
  for (size_t t = 0; t < field.phi.size(); ++t) absphi[t] = std::abs(field.phi[t]);
  svg.add_mesh_field(*mesh, absphi);
  svg.add_polygon(m.domain.boundary);
  svg.add_polyline(tr.points);
  svg.add_dot({0.5, 0.0});
  svg.add_dot({-4.0 / 9.0, 0.0}, "#2c3e50");
  svg.write("butterfly_trajectory.svg");
  std::printf("wrote butterfly_trajectory.svg\n");
  return 0;
}
