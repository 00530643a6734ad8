#include "qh/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qh/ball.hpp"
#include "qh/errors.hpp"
#include "qh/examples.hpp"
#include "qh/io.hpp"
#include "qh/paths.hpp"
#include "qh/renorm.hpp"

namespace qh {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string color(std::size_t k) { return kPalette[k % (sizeof kPalette / sizeof *kPalette)]; }

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw InvalidInput(what + ": cannot read '" + item + "' as a number");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidInput(what + ": empty list");
  return out;
}

Point parse_point(const std::string& text, int dim, const std::string& what) {
  const auto v = parse_list(text, what);
  if (static_cast<int>(v.size()) != dim)
    throw InvalidInput(what + ": expected " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
  return Point::from_span(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// State shared by every command: domain, configuration, outputs and the manifest.
struct Session {
  std::ostream& out;
  std::string domain_arg = "strip";
  int n = 3;
  std::string config_path;
  std::string out_dir;
  std::string svg_path;
  std::uint64_t seed = 1;
  SolverConfig s;
  QuadratureConfig q;
  std::optional<DomainSpec> domain_;
  RunManifest manifest;

  explicit Session(std::ostream& o) : out(o) {}

  void configure() {
    if (!config_path.empty()) {
      Json doc;
      try {
        doc = Json::parse(read_file(config_path));
      } catch (const Json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
      }
      apply_config(doc, s, q);
    }
    s.rng_seed = seed;
    manifest.rng_seed = seed;
    manifest.config = {{"solver", solver_to_json(s)}, {"quadrature", quadrature_to_json(q)}};
  }

  const DomainSpec& domain() {
    if (!domain_) {
      const bool file = domain_arg.size() > 5 && domain_arg.substr(domain_arg.size() - 5) == ".json";
      domain_ = file ? parse_domain_spec(read_file(domain_arg)) : presets::by_name(domain_arg, n);
      manifest.input_hash = content_hash(domain_to_json(*domain_).dump());
    }
    return *domain_;
  }

  void write(const std::string& name, const std::string& content) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    atomic_write((std::filesystem::path(out_dir) / name).string(), content);
    manifest.outputs.push_back(name);
  }

  void figure(const SvgScene& scene, const std::string& default_name) {
    const std::string svg = render_svg(scene);
    if (!svg_path.empty()) {
      atomic_write(svg_path, svg);
      manifest.outputs.push_back(svg_path);
    }
    write(default_name, svg);
  }

  void line(const std::string& key, double v) { out << key << " = " << format_number(v) << "\n"; }
};

int run_dist(Session& ss, const std::string& from, const std::string& to, bool write_path) {
  const DomainSpec& d = ss.domain();
  const Point x = parse_point(from, d.dimension(), "--from"), y = parse_point(to, d.dimension(), "--to");
  const GeodesicResult g = qh_distance(d, x, y, ss.s, ss.q);
  ss.line("k", g.qh_length);
  ss.line("lower_bound_gap", g.lower_bound_gap);
  ss.out << "converged = " << (g.converged ? "true" : "false") << "\n";
  ss.write("geodesic.json", geodesic_to_json(g).dump(2) + "\n");
  if (write_path) ss.write("geodesic.csv", path_csv(g.path).str());
  if (!ss.svg_path.empty() || write_path) {
    SvgScene scene;
    scene.domain = d;
    if (d.dimension() == 3) scene.plane = std::array<int, 2>{0, 1};
    scene.layers.push_back({"geodesic", {g.path}, color(0)});
    scene.title = d.name() + ": k = " + format_number(g.qh_length);
    ss.figure(scene, "geodesic.svg");
  }
  return g.converged ? kExitPass : kExitVerdictFail;
}

int run_multiplicity(Session& ss, const std::string& from, const std::string& to) {
  const DomainSpec& d = ss.domain();
  const Point x = parse_point(from, d.dimension(), "--from"), y = parse_point(to, d.dimension(), "--to");
  const auto found = geodesic_multiplicity(d, x, y, ss.s, ss.q);
  ss.line("geodesics", static_cast<double>(found.size()));
  Json all = Json::array();
  SvgScene scene;
  scene.domain = d;
  if (d.dimension() == 3) scene.plane = std::array<int, 2>{0, 1};
  for (std::size_t k = 0; k < found.size(); ++k) {
    ss.line("k[" + std::to_string(k) + "]", found[k].qh_length);
    all.push_back(geodesic_to_json(found[k]));
    ss.write("geodesic_" + std::to_string(k) + ".csv", path_csv(found[k].path).str());
    scene.layers.push_back({"geodesic " + std::to_string(k), {found[k].path}, color(k)});
  }
  ss.write("geodesics.json", all.dump(2) + "\n");
  scene.title = d.name() + ": " + std::to_string(found.size()) + " geodesics";
  ss.figure(scene, "geodesics.svg");
  return kExitPass;
}

int run_ball(Session& ss, const std::string& center, double r, double h, double half, bool polish, int radials) {
  const DomainSpec& d = ss.domain();
  const Point c = parse_point(center, d.dimension(), "--center");
  const DistanceField field = distance_field_around(d, c, half, h, ss.s, ss.q);
  const BallContour contour = ball_contour(field, r, polish);
  ss.line("loops", static_cast<double>(contour.loops.size()));
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& loop : contour.loops)
    for (const auto& v : loop.vertices) {
      xmin = std::min(xmin, v[0]), xmax = std::max(xmax, v[0]);
      ymin = std::min(ymin, v[1]), ymax = std::max(ymax, v[1]);
    }
  ss.line("x_min", xmin);
  ss.line("x_max", xmax);
  ss.line("y_min", ymin);
  ss.line("y_max", ymax);
  ss.write("contour.csv", contour_csv(contour).str());
  SvgScene scene;
  scene.domain = d;
  scene.layers.push_back({"S_k(x0, " + format_number(r) + ")", contour.loops, color(0)});
  if (radials > 0 && d.dimension() == 2) {
    std::vector<Polyline> radii;
    for (int k = 0; k < radials; ++k) {
      const double th = 2.0 * std::numbers::pi * k / radials;
      const Point u{std::cos(th), std::sin(th)};
      const double rho = directional_radius(d, c, u, r, ss.s, ss.q);
      radii.push_back(qh_distance(d, c, c + u * rho, ss.s, ss.q).path);
    }
    scene.layers.push_back({"geodesic radii", radii, color(2), 1.0});
  }
  scene.layers.push_back({"center", {Polyline{{c}}}, color(1), 1.5, true});
  scene.title = d.name() + " ball";
  ss.figure(scene, "ball.svg");
  return kExitPass;
}

int run_smoothcheck(Session& ss, const std::string& center, double r, int probes, const std::string& schedule,
                    double exponent, double max_ratio) {
  const DomainSpec& d = ss.domain();
  const Point c = parse_point(center, d.dimension(), "--center");
  std::vector<double> steps;
  if (schedule.empty())
    for (int j = 0; j <= 8; ++j) steps.push_back(0.1 * std::ldexp(1.0, -j));
  else
    steps = parse_list(schedule, "--schedule");
  const SmoothnessReport rep = smoothness_profile(d, c, r, probes, steps, ss.s, ss.q, exponent);
  const SmoothnessDecay decay = smoothness_decay(rep);
  CsvTable t;
  t.header = {"probe", "direction", "step", "ratio"};
  for (const auto& row : rep.rows)
    for (std::size_t j = 0; j < row.ratios.size(); ++j)
      t.add({std::to_string(row.probe), row.direction, format_number(rep.schedule[j]), format_number(row.ratios[j])});
  ss.write("smoothness.csv", t.str());
  ss.line("worst_final_over_initial", decay.worst_decay);
  ss.line("worst_step_growth", decay.worst_growth);
  const bool pass = decay.worst_decay < max_ratio;
  ss.out << "verdict = " << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitPass : kExitVerdictFail;
}

int run_ortho(Session& ss, const std::string& from, const std::string& to, const std::string& schedule, double band) {
  const DomainSpec& d = ss.domain();
  const Point x0 = parse_point(from, d.dimension(), "--from"), x = parse_point(to, d.dimension(), "--to");
  std::vector<double> ts = parse_list(schedule, "--t");
  std::sort(ts.begin(), ts.end());
  const OrthogonalityReport rep = orthogonality_ratio(d, x0, x, ts, ss.s, ss.q);
  CsvTable t;
  t.header = {"t", "ratio", "error_bar"};
  for (std::size_t k = 0; k < rep.t.size(); ++k)
    t.add({format_number(rep.t[k]), format_number(rep.ratio[k]), format_number(rep.error_bar[k])});
  ss.write("orthogonality.csv", t.str());
  bool pass = rep.ratio.size() >= 2;
  for (std::size_t k = 0; k < rep.ratio.size(); ++k) {
    ss.line("ratio[t=" + format_number(rep.t[k]) + "]", rep.ratio[k]);
    if (k + 2 >= rep.ratio.size()) pass = pass && std::abs(rep.ratio[k] - 1.0) <= band;
  }
  ss.out << "verdict = " << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitPass : kExitVerdictFail;
}

int run_cusp(Session& ss, const std::string& xs, double r, const std::string& ys, const std::string& fractions,
             int samples, double tol) {
  const DomainSpec& d = ss.domain();
  const Point x = parse_point(xs, d.dimension(), "--x"), y = parse_point(ys, d.dimension(), "--y");
  const CuspReport rep = cusp_free_check(d, x, r, y, parse_list(fractions, "--fractions"), samples, tol, ss.s, ss.q);
  CsvTable t;
  t.header = {"z1", "z2", "u", "radius", "samples", "max_k", "included"};
  for (const auto& b : rep.balls)
    t.add({format_number(b.z[0]), format_number(b.z[1]), format_number(b.u), format_number(b.radius),
           std::to_string(b.samples), format_number(b.max_k), b.included ? "true" : "false"});
  ss.write("cusp.csv", t.str());
  ss.line("violations", rep.violations);
  ss.out << "verdict = " << (rep.violations == 0 ? "pass" : "fail") << "\n";
  return rep.violations == 0 ? kExitPass : kExitVerdictFail;
}

int run_renorm(Session& ss, double r, const std::vector<std::string>& evals, const std::string& hausdorff,
               int directions, int triangle, const std::string& modulus, const std::string& tau, int budget) {
  const DomainSpec& d = ss.domain();
  bool pass = true;
  if (!hausdorff.empty()) {
    const HausdorffReport rep = hausdorff_convergence(d, parse_list(hausdorff, "--hausdorff"), directions, ss.s, ss.q);
    CsvTable t;
    t.header = {"r", "scale", "hausdorff_distance"};
    for (const auto& st : rep.steps) {
      t.add({format_number(st.r), format_number(st.scale), format_number(st.distance)});
      ss.line("d_H[r=" + format_number(st.r) + "]", st.distance);
    }
    ss.write("hausdorff.csv", t.str());
    ss.out << "strictly_decreasing = " << (rep.strictly_decreasing ? "true" : "false") << "\n";
    pass = pass && rep.strictly_decreasing;
  }
  if (evals.empty() && triangle <= 0 && modulus.empty() && !hausdorff.empty()) {
    ss.out << "verdict = " << (pass ? "pass" : "fail") << "\n";
    return pass ? kExitPass : kExitVerdictFail;
  }
  InducedNormOptions opt;
  opt.rng_seed = ss.seed;
  const InducedNorm norm(d, r, ss.s, ss.q, opt);
  if (!evals.empty()) {
    CsvTable t;
    t.header = {"x1", "x2", "M"};
    for (const auto& e : evals) {
      const Point x = parse_point(e, d.dimension(), "--eval");
      const double m = norm(x);
      ss.line("M(" + e + ")", m);
      std::vector<std::string> row;
      for (int k = 0; k < 2; ++k) row.push_back(format_number(x[k]));
      row.push_back(format_number(m));
      if (d.dimension() == 2) t.add(row);
    }
    ss.write("norm_values.csv", t.str());
  }
  if (triangle > 0) {
    const TriangleReport rep = triangle_check(norm, triangle, ss.seed);
    ss.line("triangle_pairs", rep.pairs);
    ss.line("triangle_violations", static_cast<double>(rep.violations.size()));
    ss.line("triangle_max_excess", rep.max_excess);
    pass = pass && rep.violations.empty();
  }
  if (!modulus.empty()) {
    if (modulus != "convexity" && modulus != "smoothness")
      throw InvalidInput("--modulus must be 'convexity' or 'smoothness'");
    const ModulusKind kind = modulus == "convexity" ? ModulusKind::Convexity : ModulusKind::Smoothness;
    const ModulusEstimate est = modulus_estimate(norm, kind, parse_list(tau, "--tau"), budget, ss.seed);
    CsvTable t;
    t.header = {"tau", modulus == "convexity" ? "delta" : "mu", "samples"};
    for (std::size_t k = 0; k < est.tau.size(); ++k) {
      t.add({format_number(est.tau[k]), format_number(est.value[k]), std::to_string(est.samples[k])});
      ss.line(std::string(modulus == "convexity" ? "delta" : "mu") + "[tau=" + format_number(est.tau[k]) + "]",
              est.value[k]);
    }
    ss.out << "note = " << est.note << "\n";
    ss.write("modulus.csv", t.str());
  }
  if (d.dimension() == 2) {
    std::vector<Point> dirs;
    for (int k = 0; k < 128; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 128;
      dirs.push_back(Point{std::cos(th), std::sin(th)});
    }
    const auto rho = norm.radii(dirs);
    Polyline sphere;
    for (int k = 0; k <= 128; ++k) sphere.vertices.push_back(dirs[k % 128] * rho[k % 128]);
    SvgScene scene;
    scene.domain = d;
    scene.layers.push_back({"{M = 1} = S_k(0, " + format_number(r) + ")", {sphere}, color(0)});
    scene.title = d.name() + " induced norm";
    ss.figure(scene, "norm_ball.svg");
  }
  ss.out << "verdict = " << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitPass : kExitVerdictFail;
}

SvgScene verdict_scene(const ExampleVerdict& v, int n) {
  SvgScene scene;
  scene.title = v.id;
  if (v.id.rfind("omega-", 0) == 0)
    scene.domain = build_omega_n(n);
  else if (v.id.rfind("polygon-", 0) == 0)
    scene.domain = presets::polygon_p();
  else if (v.id == "l2-lengths")
    scene.domain = presets::l2_section(3);
  else if (v.id == "starlike3d") {
    scene.domain = presets::starlike3d();
    scene.plane = std::array<int, 2>{0, 1};
  }
  for (std::size_t k = 0; k < v.paths.size(); ++k) scene.layers.push_back({v.paths[k].first, {v.paths[k].second}, color(k)});
  return scene;
}

void report_verdict(Session& ss, const ExampleVerdict& v, int n) {
  ss.out << (v.passed ? "PASS " : "FAIL ") << v.id << "\n";
  for (const auto& c : v.checks)
    ss.out << "  [" << (c.passed ? "ok" : "FAIL") << (c.informational ? ", informational" : "") << "] " << c.name
           << ": " << format_number(c.measured) << " (threshold " << format_number(c.threshold) << ")\n";
  ss.write("verdict_" + v.id + ".json", verdict_to_json(v).dump(2) + "\n");
  SvgScene scene = verdict_scene(v, n);
  const std::string svg = render_svg(scene);
  ss.write("verdict_" + v.id + ".svg", svg);
  if (!ss.svg_path.empty()) atomic_write(ss.svg_path, svg);
}

int run_example_cmd(Session& ss, const std::string& id, double t, int n, int n_max) {
  ExampleVerdict v;
  if (id == "prolongation")
    v = polygon_prolongation_check(t, ss.s, ss.q);
  else if (id == "omega-count")
    v = verify_intersection_count(n, omega_solver(n), ss.q);
  else if (id == "omega-enumerate")
    v = enumerate_sign_geodesics(n, omega_solver(n), ss.q);
  else if (id == "l2-lengths") {
    QuadratureConfig q = ss.q;
    q.abs_tol = std::min(q.abs_tol, 1e-10);
    q.rel_tol = std::min(q.rel_tol, 1e-12);
    v = l2_nongeodesic_lengths(n_max, 3.0, q);
  } else if (id == "starlike3d")
    v = starlike3d_nonuniqueness(ss.s, ss.q);
  else {
    v = run_example(id);
    if (id.rfind("omega-", 0) == 0) n = std::stoi(id.substr(6));
  }
  report_verdict(ss, v, n);
  return v.passed ? kExitPass : kExitVerdictFail;
}

int run_all_examples(Session& ss) {
  bool all = true;
  for (const auto& id : example_ids()) {
    const ExampleVerdict v = run_example(id);
    const int n = id.rfind("omega-", 0) == 0 ? std::stoi(id.substr(6)) : 3;
    report_verdict(ss, v, n);
    all = all && v.passed;
  }
  return all ? kExitPass : kExitVerdictFail;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasihyperbolic distances, geodesics, balls and induced norms", "qh"};
  app.require_subcommand(1);
  Session ss(out);
  auto common = [&](CLI::App* sub, bool with_domain) {
    if (with_domain) {
      sub->add_option("--domain", ss.domain_arg, "Preset name or a domain JSON file")->capture_default_str();
      sub->add_option("--n", ss.n, "Parameter of omega-n / l2-section")->capture_default_str();
    }
    sub->add_option("--config", ss.config_path, "JSON file with solver/quadrature overrides");
    sub->add_option("--out-dir", ss.out_dir, "Directory for CSV/JSON/SVG outputs and the run manifest");
    sub->add_option("--svg", ss.svg_path, "Write the figure to this file");
    sub->add_option("--seed", ss.seed, "Random seed")->capture_default_str();
  };

  std::string from, to, center, schedule, fractions = "0.25,0.5,0.75", ys, hausdorff, modulus, tau = "0.25,0.5,1";
  std::string t_schedule = "0.6,0.8,0.9,0.95";
  std::vector<std::string> evals;
  double r = 1.0, h = 0.1, half = 1.5, exponent = 1.0, max_ratio = 0.1, band = 0.05, tol = 1e-3, t = 0.5;
  int radials = 0, probes = 8, samples = 16, directions = 256, triangle = 0, budget = 16, n_max = 12;
  bool polish = false, multiplicity = false;
  std::string example_id;

  auto* dist = app.add_subcommand("dist", "QH distance between two points");
  common(dist, true);
  dist->add_option("--from", from)->required();
  dist->add_option("--to", to)->required();

  auto* geo = app.add_subcommand("geodesic", "Geodesic polyline (optionally all equally short ones)");
  common(geo, true);
  geo->add_option("--from", from)->required();
  geo->add_option("--to", to)->required();
  geo->add_flag("--multiplicity", multiplicity, "Search for several geodesics");

  auto* ball = app.add_subcommand("ball", "Sphere S_k(center, r) by marching squares");
  common(ball, true);
  ball->add_option("--center", center)->required();
  ball->add_option("--r", r)->required();
  ball->add_option("--spacing", h, "Lattice spacing")->capture_default_str();
  ball->add_option("--half", half, "Half-width of the lattice window")->capture_default_str();
  ball->add_flag("--polish", polish, "Move crossings to edge roots");
  ball->add_option("--radials", radials, "Geodesic radii drawn from the center to the sphere")->capture_default_str();

  auto* smooth = app.add_subcommand("smoothcheck", "Second-difference decay at sphere points");
  common(smooth, true);
  smooth->add_option("--center", center)->required();
  smooth->add_option("--r", r)->required();
  smooth->add_option("--probes", probes)->capture_default_str();
  smooth->add_option("--schedule", schedule, "Step fractions of d(probe); default 0.1*2^-j, j=0..8");
  smooth->add_option("--exponent", exponent)->capture_default_str();
  smooth->add_option("--max-ratio", max_ratio, "Pass threshold on final/initial")->capture_default_str();

  auto* ortho = app.add_subcommand("ortho", "Geodesic-sphere orthogonality ratio");
  common(ortho, true);
  ortho->add_option("--from", from)->required();
  ortho->add_option("--to", to)->required();
  ortho->add_option("--t", t_schedule, "Arclength fractions")->capture_default_str();
  ortho->add_option("--band", band, "Pass band around 1 at the two entries closest to t = 1")->capture_default_str();

  auto* cusp = app.add_subcommand("cusp", "Ball-inclusion check along a geodesic radius");
  common(cusp, true);
  cusp->add_option("--x", from)->required();
  cusp->add_option("--r", r)->required();
  cusp->add_option("--y", ys)->required();
  cusp->add_option("--fractions", fractions)->capture_default_str();
  cusp->add_option("--samples", samples)->capture_default_str();
  cusp->add_option("--tol", tol)->capture_default_str();

  auto* renorm = app.add_subcommand("renorm", "Induced norm of a centred QH ball");
  common(renorm, true);
  renorm->add_option("--r", r)->capture_default_str();
  renorm->add_option("--eval", evals, "Evaluate M at this point (repeatable)");
  renorm->add_option("--hausdorff", hausdorff, "Radii for the Hausdorff series");
  renorm->add_option("--directions", directions)->capture_default_str();
  renorm->add_option("--triangle", triangle, "Sampled triangle-inequality pairs")->capture_default_str();
  renorm->add_option("--modulus", modulus, "convexity or smoothness");
  renorm->add_option("--tau", tau)->capture_default_str();
  renorm->add_option("--budget", budget)->capture_default_str();

  auto* example = app.add_subcommand("example", "Verdict for one worked example");
  common(example, false);
  example->add_option("id", example_id, "prolongation, omega-count, omega-enumerate, l2-lengths, starlike3d or a full id")
      ->required();
  example->add_option("--t", t)->capture_default_str();
  example->add_option("--n", ss.n)->capture_default_str();
  example->add_option("--n-max", n_max)->capture_default_str();

  auto* all = app.add_subcommand("all-examples", "Every example verdict");
  common(all, false);

  if (!args.empty() && args.front().rfind("-", 0) != 0) {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == args.front();
    if (!known) {
      err << "usage error: unknown command '" << args.front() << "'\n" << app.help();
      return kExitUsage;
    }
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitError;
  try {
    ss.configure();
    ss.manifest.version = toolkit_version();
    ss.manifest.arguments = args;
    CLI::App* sub = app.get_subcommands().front();
    ss.manifest.command = sub->get_name();
    if (sub == dist)
      code = run_dist(ss, from, to, false);
    else if (sub == geo)
      code = multiplicity ? run_multiplicity(ss, from, to) : run_dist(ss, from, to, true);
    else if (sub == ball)
      code = run_ball(ss, center, r, h, half, polish, radials);
    else if (sub == smooth)
      code = run_smoothcheck(ss, center, r, probes, schedule, exponent, max_ratio);
    else if (sub == ortho)
      code = run_ortho(ss, from, to, t_schedule, band);
    else if (sub == cusp)
      code = run_cusp(ss, from, r, ys, fractions, samples, tol);
    else if (sub == renorm)
      code = run_renorm(ss, r, evals, hausdorff, directions, triangle, modulus, tau, budget);
    else if (sub == example)
      code = run_example_cmd(ss, example_id, t, ss.n, n_max);
    else if (sub == all)
      code = run_all_examples(ss);
  } catch (const Error& e) {
    err << "error [" << e.kind() << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  if (!ss.out_dir.empty()) {
    ss.manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
      ss.write("manifest.json", ss.manifest.to_json().dump(2) + "\n");
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  return code;
}

}  // namespace qh
