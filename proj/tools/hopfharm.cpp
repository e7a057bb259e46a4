// Command-line front end: extend | alternate | hopf-check | trace | douglas
// | gallery. Every run writes a versioned JSON report plus CSV/SVG artifacts
// into --out, and reruns with identical inputs are byte-identical.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "hopfharm/alternating.hpp"
#include "hopfharm/io.hpp"
#include "hopfharm/quaddiff.hpp"
#include "hopfharm/svg.hpp"

namespace fs = std::filesystem;
using namespace hopfharm;

namespace {

struct Global {
  std::string out = ".";
  std::uint64_t seed = 1;
  int threads = 1;
};

std::string join(const Global& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

// FNV-1a over input file bytes and flag strings, for the report's digest.
std::uint64_t fnv64(const std::string& bytes, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t digest_files(const std::vector<std::string>& paths) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    require(bool(in), "cannot open: " + p);
    std::stringstream ss;
    ss << in.rdbuf();
    h = fnv64(p, h);
    h = fnv64(ss.str(), h);
  }
  return h;
}

int finish(const Global& g, RunReport& rep) {
  rep.seed = g.seed;
  std::string path = join(g, rep.command + "_report.json");
  json j = run_report_to_json(rep);
  j["status"] = "ok";
  write_json_file(path, j);
  std::printf("[ok] %s -> %s\n", rep.command.c_str(), path.c_str());
  for (auto& [key, val] : rep.metrics.items())
    std::printf("  %-24s %s\n", key.c_str(), val.dump().c_str());
  return 0;
}

int fail(const Global& g, const std::string& command, const std::exception& e) {
  RunReport rep;
  rep.command = command;
  rep.seed = g.seed;
  json j = run_report_to_json(rep);
  j["status"] = "error";
  j["error"] = {{"code", 1}, {"message", e.what()}};
  try {
    write_json_file(join(g, command + "_report.json"), j);
  } catch (...) {
  }
  std::fprintf(stderr, "[error] %s: %s\n", command.c_str(), e.what());
  return 1;
}

std::vector<double> triangle_abs_jacobian(const MeshMap& f) {
  auto ders = wirtinger(f);
  std::vector<double> out(ders.size());
  for (size_t t = 0; t < ders.size(); ++t)
    out[t] = std::norm(ders[t].h_z) - std::norm(ders[t].h_zbar);
  return out;
}

void write_map_svg(const std::string& path, const MeshMap& f, const JordanDomain& target) {
  SvgScene svg;
  std::vector<Point2> image(f.values.begin(), f.values.end());
  svg.add_mesh_field(*f.mesh, triangle_abs_jacobian(f), &image);
  svg.add_polygon(target.boundary);
  svg.write(path);
}

MeshMap sample_closed_form(const ClosedFormMap& m, double edge) {
  SamplingRecipe recipe = sampling_recipe(m, edge);
  auto mesh = std::make_shared<TriangleMesh>(triangulate(recipe.domain, edge, recipe.constraints));
  MeshMap f;
  f.mesh = mesh;
  f.values.reserve(mesh->vertices.size());
  for (const auto& z : mesh->vertices) f.values.push_back(m.eval(z));
  return f;
}

ClosedFormMap gallery_closed_form(const std::string& name) {
  if (name == "butterfly") return butterfly_map();
  if (name == "strip") return strip_map();
  if (name == "control") return control_map();
  throw std::runtime_error("unknown closed-form gallery map: " + name);
}

// ------------------------------------------------------------------ extend
int cmd_extend(const Global& g, const std::string& domain_f, const std::string& target_f,
               const std::string& boundary_f, double edge) {
  JordanDomain X = domain_from_json(read_json_file(domain_f));
  JordanDomain Y = domain_from_json(read_json_file(target_f));
  BoundaryMap bm = boundary_map_from_json(read_json_file(boundary_f));
  RkcResult r = rkc_extend_and_check(X, Y, bm, edge);

  RunReport rep;
  rep.command = "extend";
  rep.params = {{"edge", edge}, {"inputs_digest", digest_files({domain_f, target_f, boundary_f})}};
  rep.metrics = {{"vertices", int(r.map.mesh->vertices.size())},
                 {"energy", dirichlet_energy(r.map)},
                 {"min_jacobian", r.min_jacobian},
                 {"negative_jacobians", r.negative_jacobian_count},
                 {"escape_count", int(r.escape_vertices.size())},
                 {"escape_depth", r.escape_depth}};
  std::string map_path = join(g, "extend_map.json");
  write_json_file(map_path, map_to_json(r.map));
  std::string svg_path = join(g, "extend_image.svg");
  write_map_svg(svg_path, r.map, Y);
  rep.outputs = {map_path, svg_path};
  return finish(g, rep);
}

// --------------------------------------------------------------- alternate
int cmd_alternate(const Global& g, const std::string& gallery, const std::string& domain_f,
                  const std::string& target_f, const std::string& boundary_f,
                  std::vector<std::string> cell_fs, double edge, int iters, double sup_tol,
                  double energy_tol, int frame_stride) {
  AlternatingConfig cfg;
  cfg.max_iters = iters;
  cfg.sup_tol = sup_tol;
  cfg.energy_tol = energy_tol;

  RunReport rep;
  rep.command = "alternate";
  rep.params = {{"edge", edge},          {"iters", iters},
                {"sup_tol", sup_tol},    {"energy_tol", energy_tol},
                {"gallery", gallery},    {"frame_stride", frame_stride}};

  std::vector<std::string> outputs;
  auto frame_observer = [&](int k, const MeshMap& m) {
    if (frame_stride <= 0 || k % frame_stride != 0) return;
    char name[64];
    std::snprintf(name, sizeof name, "alternate_frame_%03d.svg", k);
    std::string path = join(g, name);
    write_map_svg(path, m, cfg.Y);
    outputs.push_back(path);
  };

  AlternatingResult res;
  SymmetricMesh sm;
  bool symmetric = false;
  if (gallery == "heart") {
    HeartData heart = heart_setup();
    cfg.Y = heart.Y;
    cfg.Y1 = heart.Y1;
    cfg.Y2 = heart.Y2;
    sm = symmetric_disk_mesh(edge);
    symmetric = true;
    res = run_alternating(star_initial_map(sm, heart.g), cfg, frame_observer);
  } else {
    require(!domain_f.empty() && !target_f.empty() && !boundary_f.empty(),
            "alternate: domain, target, and boundary files are required without --gallery");
    require(cell_fs.size() == 1 || cell_fs.size() == 2,
            "alternate: pass --cell once or twice");
    JordanDomain X = domain_from_json(read_json_file(domain_f));
    cfg.Y = domain_from_json(read_json_file(target_f));
    cfg.Y1 = domain_from_json(read_json_file(cell_fs[0]));
    cfg.Y2 = cell_fs.size() == 2 ? domain_from_json(read_json_file(cell_fs[1])) : cfg.Y1;
    BoundaryMap bm = boundary_map_from_json(read_json_file(boundary_f));
    rep.params["inputs_digest"] =
        digest_files({domain_f, target_f, boundary_f, cell_fs[0], cell_fs.back()});
    res = run_alternating(X, bm, cfg, edge, frame_observer);
  }

  std::string trace_path = join(g, "alternate_trace.csv");
  {
    std::ofstream out(trace_path);
    out << "k,energy,sup_delta,replaced_interior,hopf_residual\n";
    for (const auto& st : res.trace)
      out << st.k << ',' << st.energy << ',' << st.sup_delta << ',' << st.replaced_interior
          << ',' << st.hopf_residual << '\n';
  }
  std::string map_path = join(g, "alternate_map.json");
  write_json_file(map_path, map_to_json(res.map));
  std::string svg_path = join(g, "alternate_final.svg");
  write_map_svg(svg_path, res.map, cfg.Y);
  outputs.insert(outputs.begin(), {trace_path, map_path, svg_path});

  auto squeezes = detect_squeezing(res.map, cfg.Y, 0.02);
  rep.metrics = {{"iterations", res.iterations},
                 {"energy_initial", res.trace.front().energy},
                 {"energy_final", res.trace.back().energy},
                 {"residual_initial", res.trace.front().hopf_residual},
                 {"residual_final", res.trace.back().hopf_residual},
                 {"squeeze_components", int(squeezes.size())}};
  rep.params["status"] = to_string(res.status);
  if (symmetric) rep.metrics["symmetry_violation"] = odd_symmetry_violation(sm, res.map);
  rep.outputs = outputs;
  return finish(g, rep);
}

// -------------------------------------------------------------- hopf-check
int cmd_hopf_check(const Global& g, const std::string& map_f, const std::string& gallery,
                   int levels, double edge0) {
  RunReport rep;
  rep.command = "hopf-check";
  rep.params = {{"levels", levels}, {"edge0", edge0}, {"gallery", gallery}};

  std::vector<double> edges, residuals;
  if (!map_f.empty()) {
    MeshMap f = map_from_json(read_json_file(map_f));
    rep.params["inputs_digest"] = digest_files({map_f});
    edges.push_back(0);
    residuals.push_back(holomorphy_residual(hopf_product(f)).global);
  } else {
    ClosedFormMap m = gallery_closed_form(gallery);
    for (int k = 0; k < levels; ++k) {
      double edge = edge0 / double(1 << k);
      MeshMap f = sample_closed_form(m, edge);
      edges.push_back(edge);
      residuals.push_back(holomorphy_residual(hopf_product(f)).global);
    }
  }
  for (size_t k = 0; k < residuals.size(); ++k) {
    char key[32];
    std::snprintf(key, sizeof key, "residual_%zu", k);
    rep.metrics[key] = residuals[k];
  }
  if (residuals.size() >= 2) {
    double rate = std::log(residuals.front() / residuals.back()) /
                  std::log(edges.front() / edges.back());
    rep.metrics["fitted_rate"] = rate;
  }
  std::string csv_path = join(g, "hopfcheck_residuals.csv");
  {
    std::ofstream out(csv_path);
    out << "edge,residual\n";
    for (size_t k = 0; k < residuals.size(); ++k)
      out << edges[k] << ',' << residuals[k] << '\n';
  }
  rep.outputs = {csv_path};
  return finish(g, rep);
}

// ------------------------------------------------------------------- trace
int cmd_trace(const Global& g, const std::string& poly_spec, const std::string& domain_f,
              const std::string& gallery, std::vector<std::string> starts, double step,
              int competitors) {
  QuadDifferential q = [&] {
    if (!gallery.empty()) {
      ClosedFormMap m = gallery_closed_form(gallery);
      return QuadDifferential::sampled(hopf_product(sample_closed_form(m, 0.03)), m.domain);
    }
    require(!poly_spec.empty(), "trace: need --poly or --gallery");
    std::vector<cplx> coeffs;
    std::stringstream ss(poly_spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
      double re = 0, im = 0;
      require(std::sscanf(item.c_str(), "%lf,%lf", &re, &im) == 2,
              "trace: --poly expects re,im;re,im;...");
      coeffs.emplace_back(re, im);
    }
    JordanDomain dom = domain_f.empty() ? regular_polygon({0, 0}, 1.0, 256, "disk")
                                        : domain_from_json(read_json_file(domain_f));
    return QuadDifferential::polynomial(coeffs, dom);
  }();

  RunReport rep;
  rep.command = "trace";
  rep.params = {{"step", step}, {"competitors", competitors}, {"gallery", gallery}};

  TraceOptions opt;
  opt.step = step;
  Rng rng(g.seed);
  SvgScene svg;
  svg.add_polygon(q.domain().boundary);
  std::vector<std::string> outputs;
  int minimal_pass = 0, minimal_total = 0;
  for (size_t i = 0; i < starts.size(); ++i) {
    double x = 0, y = 0;
    require(std::sscanf(starts[i].c_str(), "%lf,%lf", &x, &y) == 2,
            "trace: --start expects x,y");
    TraceResult tr = trace_vertical(q, {x, y}, opt);
    char name[64];
    std::snprintf(name, sizeof name, "trace_%zu.csv", i);
    std::string path = join(g, name);
    write_polyline_csv(path, tr.points);
    outputs.push_back(path);
    svg.add_polyline(tr.points);
    svg.add_dot({x, y});
    char key[64];
    std::snprintf(key, sizeof key, "phi_length_%zu", i);
    rep.metrics[key] = tr.phi_length;
    std::snprintf(key, sizeof key, "ends_%zu", i);
    rep.params[key] = std::string(to_string(tr.backward_end)) + "/" + to_string(tr.forward_end);
    if (competitors > 0) {
      MinimalityReport mr = minimal_length_check(q, tr, rng, competitors);
      ++minimal_total;
      minimal_pass += mr.minimal ? 1 : 0;
    }
  }
  if (minimal_total)
    rep.metrics["minimal_pass_rate"] = double(minimal_pass) / double(minimal_total);
  std::string svg_path = join(g, "trace_overlay.svg");
  svg.write(svg_path);
  outputs.push_back(svg_path);
  rep.outputs = outputs;
  return finish(g, rep);
}

// ----------------------------------------------------------------- douglas
int cmd_douglas(const Global& g, const std::string& boundary_f, const std::string& gallery,
                std::vector<int> Ns) {
  BoundaryMap bm;
  RunReport rep;
  rep.command = "douglas";
  if (!boundary_f.empty()) {
    bm = boundary_map_from_json(read_json_file(boundary_f));
    rep.params["inputs_digest"] = digest_files({boundary_f});
  } else if (gallery == "identity") {
    bm = identity_circle_map();
  } else if (gallery == "lacunary") {
    bm = lacunary_circle_map();
  } else {
    throw std::runtime_error("douglas: need a boundary file or --gallery identity|lacunary");
  }
  rep.params["gallery"] = gallery;
  DouglasScan scan = douglas_scan(bm, Ns);
  for (size_t k = 0; k < scan.value.size(); ++k) {
    char key[32];
    std::snprintf(key, sizeof key, "value_N%d", scan.N[k]);
    rep.metrics[key] = scan.value[k];
  }
  rep.metrics["last_ratio"] = scan.ratio.back();
  rep.metrics["divergence_flag"] = scan.divergence_flag ? 1 : 0;
  return finish(g, rep);
}

// ----------------------------------------------------------------- gallery
int cmd_gallery(const Global& g, const std::string& extract, double edge) {
  RunReport rep;
  rep.command = "gallery";
  rep.params = {{"extract", extract}, {"edge", edge}};
  if (extract.empty()) {
    for (const auto& e : gallery_manifest())
      std::printf("%-16s %s\n", e.name.c_str(), e.description.c_str());
    rep.metrics["entries"] = int(gallery_manifest().size());
    return finish(g, rep);
  }

  std::vector<std::string> outputs;
  auto put = [&](const std::string& name, const json& j) {
    std::string path = join(g, name);
    write_json_file(path, j);
    outputs.push_back(path);
  };
  if (extract == "butterfly" || extract == "strip" || extract == "control") {
    ClosedFormMap m = gallery_closed_form(extract);
    put(extract + "_domain.json", domain_to_json(m.domain));
    put(extract + "_map.json", map_to_json(sample_closed_form(m, edge)));
  } else if (extract.rfind("clover", 0) == 0) {
    double eps = 0.25;
    if (auto colon = extract.find(':'); colon != std::string::npos)
      eps = std::stod(extract.substr(colon + 1));
    CloverData c = clover(eps);
    put("clover_domain.json", domain_to_json(c.X));
    put("clover_target.json", domain_to_json(c.Y));
    put("clover_boundary.json", boundary_map_to_json(c.g));
  } else if (extract == "heart") {
    HeartData h = heart_setup();
    put("heart_domain.json", domain_to_json(h.X));
    put("heart_target.json", domain_to_json(h.Y));
    put("heart_cell1.json", domain_to_json(h.Y1));
    put("heart_cell2.json", domain_to_json(h.Y2));
    put("heart_boundary.json", boundary_map_to_json(h.g));
  } else if (extract == "identity") {
    put("identity_boundary.json", boundary_map_to_json(identity_circle_map()));
  } else if (extract == "lacunary") {
    put("lacunary_boundary.json", boundary_map_to_json(lacunary_circle_map()));
  } else if (extract == "random-convex") {
    Rng rng(g.seed);
    RandomTarget t = random_convex_target(rng);
    put("random_domain.json", domain_to_json(t.X));
    put("random_target.json", domain_to_json(t.Y));
    put("random_boundary.json", boundary_map_to_json(t.g));
  } else {
    throw std::runtime_error("gallery: unknown entry " + extract);
  }
  rep.metrics["files_written"] = int(outputs.size());
  rep.outputs = outputs;
  return finish(g, rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hopfharm: numerical toolkit for monotone Hopf-harmonic mappings"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "solver threads (reserved)")->capture_default_str();

  std::string domain_f, target_f, boundary_f, map_f, poly_spec, gallery, extract;
  std::vector<std::string> cell_fs, starts;
  std::vector<int> Ns{256, 1024, 4096};
  double edge = 0.05, edge0 = 0.1, step = 1e-2;
  int iters = 40, levels = 3, competitors = 40, frame_stride = 0;
  double sup_tol = 1e-8, energy_tol = 1e-10;

  auto* ext = app.add_subcommand("extend", "harmonic extension with injectivity and escape check");
  ext->add_option("domain", domain_f, "source domain JSON")->required();
  ext->add_option("target", target_f, "target domain JSON")->required();
  ext->add_option("boundary", boundary_f, "boundary map JSON")->required();
  ext->add_option("--edge", edge, "mesh edge target")->capture_default_str();

  auto* alt = app.add_subcommand("alternate", "alternating harmonic replacement rounds");
  alt->add_option("--gallery", gallery, "built-in setup: heart");
  alt->add_option("--domain", domain_f, "source domain JSON");
  alt->add_option("--target", target_f, "full target JSON");
  alt->add_option("--boundary", boundary_f, "boundary map JSON");
  alt->add_option("--cell", cell_fs, "convex piece JSON (repeat for the second piece)");
  alt->add_option("--edge", edge, "mesh edge target")->capture_default_str();
  alt->add_option("--iters", iters, "maximum rounds")->capture_default_str();
  alt->add_option("--sup-tol", sup_tol, "stop when vertex moves fall below")->capture_default_str();
  alt->add_option("--energy-tol", energy_tol, "stop when energy drops fall below")
      ->capture_default_str();
  alt->add_option("--frame-stride", frame_stride, "write an SVG frame every k rounds (0 = none)")
      ->capture_default_str();

  auto* hc = app.add_subcommand("hopf-check", "Hopf product holomorphy residual study");
  hc->add_option("--map", map_f, "map JSON to check at its own resolution");
  hc->add_option("--gallery", gallery, "closed-form map: butterfly|strip|control");
  hc->add_option("--levels", levels, "refinement levels")->capture_default_str();
  hc->add_option("--edge0", edge0, "coarsest mesh edge")->capture_default_str();

  auto* tr = app.add_subcommand("trace", "trajectories of a quadratic differential");
  tr->add_option("--poly", poly_spec, "coefficients c0;c1;... as re,im pairs");
  tr->add_option("--domain", domain_f, "domain JSON for --poly (default unit disk)");
  tr->add_option("--gallery", gallery, "use a closed-form map's Hopf product");
  tr->add_option("--start", starts, "trajectory seed x,y (repeatable)")->required();
  tr->add_option("--step", step, "base arclength step")->capture_default_str();
  tr->add_option("--competitors", competitors, "random competitors for the length check")
      ->capture_default_str();

  auto* dg = app.add_subcommand("douglas", "Douglas boundary integral scan");
  dg->add_option("--boundary", boundary_f, "boundary map JSON");
  dg->add_option("--gallery", gallery, "built-in boundary map: identity|lacunary");
  dg->add_option("--N", Ns, "node counts, ascending")->capture_default_str();

  auto* gl = app.add_subcommand("gallery", "list or extract the example corpus");
  gl->add_option("extract", extract, "entry to extract (omit to list)");
  gl->add_option("--edge", edge, "mesh edge for sampled map extracts")->capture_default_str();

  for (auto* sub : {ext, alt, hc, tr, dg, gl}) sub->fallthrough();
  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (ext->parsed()) return cmd_extend(g, domain_f, target_f, boundary_f, edge);
    if (alt->parsed())
      return cmd_alternate(g, gallery, domain_f, target_f, boundary_f, cell_fs, edge, iters,
                           sup_tol, energy_tol, frame_stride);
    if (hc->parsed()) return cmd_hopf_check(g, map_f, gallery, levels, edge0);
    if (tr->parsed()) return cmd_trace(g, poly_spec, domain_f, gallery, starts, step, competitors);
    if (dg->parsed()) return cmd_douglas(g, boundary_f, gallery, Ns);
    if (gl->parsed()) return cmd_gallery(g, extract, edge);
  } catch (const std::exception& e) {
    return fail(g, cmd, e);
  }
  return 1;
}
