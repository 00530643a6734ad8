// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 when the failing set equals
// the criteria named with --expect-fail (those documented as not attainable), nonzero otherwise.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qh/ball.hpp"
#include "qh/cli.hpp"
#include "qh/errors.hpp"
#include "qh/examples.hpp"
#include "qh/io.hpp"
#include "qh/renorm.hpp"

using namespace qh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void progress(const std::string& msg) { std::cerr << "  .. " << msg << std::endl; }

// ---- 1 --------------------------------------------------------------------------------------
Outcome punctured_plane() {
  const auto t0 = Clock::now();
  const GeodesicResult g = qh_distance(presets::punctured_plane(), Point{-1.0, 0.0}, Point{1.0, 0.0});
  const double secs = seconds_since(t0);
  const double rel = std::abs(g.qh_length - std::numbers::pi) / std::numbers::pi;
  return {g.converged && rel < 1e-3 && secs < 10.0,
          "k = " + fmt(g.qh_length, 10) + ", rel err " + fmt(rel) + " (< 1e-3), " + fmt(secs, 3) + " s (< 10)"};
}

// ---- 2 --------------------------------------------------------------------------------------
Outcome halfplane_oracle() {
  const auto t0 = Clock::now();
  const DomainSpec h = presets::half_plane();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.5, 2.0);
  double worst = 0.0;
  int unconverged = 0;
  for (int k = 0; k < 100; ++k) {
    const Point x{ux(rng), uy(rng)}, y{ux(rng), uy(rng)};
    const GeodesicResult g = qh_distance(h, x, y);
    if (!g.converged) ++unconverged;
    worst = std::max(worst, std::abs(g.qh_length - halfplane_distance_oracle(x, y)) / halfplane_distance_oracle(x, y));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-3 && unconverged == 0 && secs < 60.0,
          "100 pairs, max rel err " + fmt(worst) + " (< 1e-3), unconverged " + std::to_string(unconverged) + ", " +
              fmt(secs, 3) + " s (< 60)"};
}

// ---- 3 --------------------------------------------------------------------------------------
Outcome polygon() {
  bool ok = true;
  std::string detail;
  for (double t : {0.25, 0.5, 1.0}) {
    const ExampleVerdict v = polygon_prolongation_check(t);
    double miss = 0.0, spread = 0.0, kerr = 0.0;
    for (const auto& c : v.checks) {
      if (c.name.find("passes through y") != std::string::npos) miss = std::max(miss, c.measured);
      if (c.name == "continuations diverge") spread = c.measured;
      if (c.name == "k(x,y) = t") kerr = c.measured;
    }
    ok = ok && v.passed;
    detail += "t=" + fmt(t) + ": |k-t| " + fmt(kerr, 2) + ", miss " + fmt(miss, 2) + ", sup-dist " + fmt(spread, 3) +
              (v.passed ? "; " : " FAILED; ");
  }
  return {ok, detail + "(|k-t| < 1e-4, miss < 1e-3, sup-dist > 0.5)"};
}

// ---- 4 --------------------------------------------------------------------------------------
Outcome omega_multiplicity() {
  bool ok = true;
  std::string detail;
  for (int n : {3, 4, 5}) {
    const auto t0 = Clock::now();
    const auto found = sign_geodesics(n, omega_solver(n));
    const ExampleVerdict count = sign_geodesics_verdict(n, found);
    // Closed-form length of every sign geodesic.
    const double oracle = (4.0 * n - 5.0) * std::numbers::pi / 3.0;
    double oracle_err = 0.0;
    for (const auto& g : found) oracle_err = std::max(oracle_err, std::abs(g.geodesic.qh_length - oracle) / oracle);
    const unsigned all_above = (1u << (n - 1)) - 1u;
    const GeodesicResult* upper = nullptr;
    const GeodesicResult* lower = nullptr;
    for (const auto& g : found) {
      if (g.pattern == all_above) upper = &g.geodesic;
      if (g.pattern == 0u) lower = &g.geodesic;
    }
    const ExampleVerdict cross = intersection_verdict(n, *upper, lower);
    double distinct = 0, spread = 0, hits = 0;
    for (const auto& [k, v] : count.measured) {
      if (k == "distinct") distinct = v;
      if (k == "length spread") spread = v;
    }
    for (const auto& [k, v] : cross.measured)
      if (k == "intersections") hits = v;
    const bool pass = count.passed && cross.passed && oracle_err < 1e-3;
    ok = ok && pass;
    detail += "n=" + std::to_string(n) + ": " + fmt(distinct) + "/" + std::to_string(1 << (n - 1)) + " geodesics, spread " +
              fmt(spread, 2) + ", |gamma1 ^ gamma2| = " + fmt(hits) + ", rel dev from (4n-5)pi/3 " + fmt(oracle_err, 2) +
              ", " + fmt(seconds_since(t0), 3) + " s" + (pass ? "; " : " FAILED; ");
    progress("omega n=" + std::to_string(n) + " done");
  }
  return {ok, detail};
}

// ---- 5 --------------------------------------------------------------------------------------
DistanceField strip_field(double h) {
  return distance_field(presets::strip(), Point{0.0, 0.0}, Point{-1.1, -1.0}, Point{1.1, 1.0}, h);
}

std::map<double, DistanceField> strip_fields;

const DistanceField& cached_strip_field(double h) {
  auto it = strip_fields.find(h);
  if (it == strip_fields.end()) it = strip_fields.emplace(h, strip_field(h)).first;
  return it->second;
}

Outcome smoothness() {
  std::vector<double> schedule;
  for (int j = 0; j <= 8; ++j) schedule.push_back(0.1 * std::ldexp(1.0, -j));
  const SmoothnessReport rep = smoothness_profile(presets::strip(), Point{0.0, 0.0}, 1.0, 8, schedule);
  const SmoothnessDecay decay = smoothness_decay(rep);
  const bool decays = decay.worst_decay < 0.1 && decay.worst_growth <= 1.0;
  progress("second differences done");

  const double g1 = max_tangent_gap(ball_contour(cached_strip_field(0.1), 1.0, true));
  const double g2 = max_tangent_gap(ball_contour(cached_strip_field(0.05), 1.0, true));
  const double ratio = g2 / g1;
  const bool halves = ratio >= 0.4 && ratio <= 0.6;
  return {decays && halves, "(a) worst final/initial " + fmt(decay.worst_decay) + " (< 0.1), worst step growth " +
                                fmt(decay.worst_growth) + " (<= 1): " + (decays ? "ok" : "FAILED") +
                                "; (b) tangent gap " + fmt(g1) + " -> " + fmt(g2) + ", ratio " + fmt(ratio) +
                                " (0.5 +- 20%): " + (halves ? "ok" : "FAILED")};
}

// ---- 6 --------------------------------------------------------------------------------------
Outcome orthogonality() {
  struct Case {
    std::string label;
    DomainSpec domain;
    Point x0, x;
  };
  const std::vector<Case> cases{{"strip axis", presets::strip(), Point{0.0, 0.0}, Point{1.0, 0.0}},
                                {"half-plane", presets::half_plane(), Point{0.0, 1.0}, Point{0.6, 1.5}}};
  const std::vector<double> ts{0.8, 0.9, 0.95};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    try {
      const OrthogonalityReport rep = orthogonality_ratio(c.domain, c.x0, c.x, ts);
      const std::size_t n = rep.ratio.size();
      const bool pass = n >= 2 && std::abs(rep.ratio[n - 1] - 1.0) <= 0.05 && std::abs(rep.ratio[n - 2] - 1.0) <= 0.05;
      ok = ok && pass;
      detail += c.label + ": " + fmt(rep.ratio[n - 2]) + ", " + fmt(rep.ratio[n - 1]) + (pass ? "; " : " FAILED; ");
    } catch (const ResolutionError& e) {
      ok = false;
      detail += c.label + ": unresolved (" + e.what() + "); ";
    }
  }
  return {ok, detail + "(two entries closest to t = 1 in [0.95, 1.05])"};
}

// ---- 7 --------------------------------------------------------------------------------------
Outcome cusp() {
  const std::vector<DomainSpec> domains{presets::strip(), presets::half_plane(), presets::unit_ball()};
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0, points = 0;
  for (int k = 0; k < 20; ++k) {
    const DomainSpec& d = domains[k % 3];
    Point x{0.0, 0.0};
    if (k % 3 == 0) x = Point{2.0 * unit(rng) - 1.0, 0.6 * unit(rng) - 0.3};
    if (k % 3 == 1) x = Point{2.0 * unit(rng) - 1.0, 0.5 + unit(rng)};
    if (k % 3 == 2) x = Point{0.4 * unit(rng) - 0.2, 0.4 * unit(rng) - 0.2};
    const double r = 0.5 + unit(rng);
    const double th = 2.0 * std::numbers::pi * unit(rng);
    const Point u{std::cos(th), std::sin(th)};
    const Point y = x + u * directional_radius(d, x, u, r);
    const CuspReport rep = cusp_free_check(d, x, r, y, {0.2 + 0.6 * unit(rng)}, 16, 1e-3);
    violations += rep.violations;
    for (const auto& b : rep.balls) points += b.samples;
  }
  return {violations == 0, "20 cases, " + std::to_string(points) + " sampled points, violations " +
                               std::to_string(violations) + " (= 0)"};
}

// ---- 8 is evaluated last from the process-wide lower-bound tally ---------------------------
Outcome lower_bound() {
  const LowerBoundTally t = lower_bound_tally();
  return {t.solved > 0 && t.violations == 0, std::to_string(t.solved) + " refined distances, min k - bound " +
                                                 fmt(t.min_gap) + ", violations " + std::to_string(t.violations) +
                                                 " (= 0 at slack 1e-6)"};
}

// ---- 9 --------------------------------------------------------------------------------------
Outcome renorming() {
  const InducedNorm disk(presets::unit_ball(), 1.0);
  const double scale = 1.0 / (1.0 - std::exp(-1.0));
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.37) / 100.0;
    const Point x{std::cos(th), std::sin(th)};
    worst = std::max(worst, std::abs(disk(x) - scale) / scale);
  }
  progress("disk norm done");
  const HausdorffReport haus = hausdorff_convergence(presets::box(), {1.0, 2.0, 3.0, 4.0});
  std::string series;
  for (const auto& s : haus.steps) series += (series.empty() ? "" : ", ") + fmt(s.distance);
  progress("Hausdorff series done");
  const InducedNorm boxnorm(presets::box(), 1.0);
  const TriangleReport tri = triangle_check(boxnorm, 1000, 9);
  const bool ok = worst < 1e-4 && haus.strictly_decreasing && tri.violations.empty() && tri.pairs == 1000;
  return {ok, "disk max rel err " + fmt(worst) + " (< 1e-4); box d_H(r=1..4) " + series +
                  (haus.strictly_decreasing ? " strictly decreasing" : " NOT decreasing") + "; triangle " +
                  std::to_string(tri.violations.size()) + " violations over " + std::to_string(tri.pairs) +
                  " pairs, max excess " + fmt(tri.max_excess)};
}

// ---- 10 -------------------------------------------------------------------------------------
Outcome l2_lengths() {
  QuadratureConfig q;
  q.abs_tol = 1e-10;
  q.rel_tol = 1e-12;
  const ExampleVerdict v = l2_nongeodesic_lengths(12, 3.0, q);
  // Regression baselines from the independent mpmath quadrature (tests/oracles/l2_halfcircle.py).
  const std::vector<std::pair<int, double>> baseline{{2, 3.6462757979593100}, {3, 3.4850960651428932}, {12, 3.1876457065995214}};
  double drift = 0.0;
  for (const auto& [n, want] : baseline) drift = std::max(drift, std::abs(l2_halfcircle_length(n, true, q) - want));
  double l3 = 0, l12 = 0;
  for (const auto& [k, val] : v.measured) {
    if (k == "length n=3") l3 = val;
    if (k == "length n=12") l12 = val;
  }
  std::string informational;
  for (const auto& c : v.checks)
    if (c.informational) informational += "; recorded: " + c.name + " " + (c.passed ? "holds" : "does not hold") +
                                          " (" + fmt(c.measured, 3) + ")";
  const double factor = (l3 - std::numbers::pi) / (l12 - std::numbers::pi);
  return {v.passed && drift < 1e-9, "decreasing and > pi for n=2..12: " + std::string(v.passed ? "yes" : "NO") +
                                        "; gap ratio n=3/n=12 " + fmt(factor) + " (>= 3); baseline drift " +
                                        fmt(drift, 2) + " (< 1e-9)" + informational};
}

// ---- 11 -------------------------------------------------------------------------------------
Outcome convexity() {
  struct Case {
    std::string label;
    std::function<DistanceField()> field;
  };
  const std::vector<Case> cases{
      {"strip", [] { return cached_strip_field(0.1); }},
      {"half-plane",
       [] { return distance_field(presets::half_plane(), Point{0.0, 1.0}, Point{-1.3, 0.3}, Point{1.3, 2.9}, 0.1); }},
      {"unit ball", [] { return distance_field_around(presets::unit_ball(), Point{0.0, 0.0}, 1.0, 0.1); }},
      {"box", [] { return distance_field_around(presets::box(), Point{0.0, 0.0}, 1.0, 0.1); }}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const ConvexityReport rep = convexity_check(c.field(), 1.0, 1000, 11);
    const bool pass = rep.applicable && rep.pairs == 1000 && rep.violations.empty();
    ok = ok && pass;
    detail += c.label + ": " + std::to_string(rep.violations.size()) + "/" + std::to_string(rep.pairs) +
              (pass ? "; " : " FAILED; ");
    progress("convexity " + c.label + " done");
  }
  return {ok, detail + "(zero midpoint violations over 1000 pairs each)"};
}

// ---- 12 -------------------------------------------------------------------------------------
std::map<std::string, std::string> run_batch(const fs::path& root) {
  const std::vector<std::vector<std::string>> batch{
      {"dist", "--domain", "punctured-plane", "--from", "-1,0", "--to", "1,0"},
      {"geodesic", "--domain", "punctured-plane", "--from", "-1,0", "--to", "1,0", "--multiplicity"},
      {"ball", "--domain", "unit-ball", "--center", "0,0", "--r", "1", "--half", "1", "--spacing", "0.125", "--radials", "4"},
      {"smoothcheck", "--domain", "strip", "--center", "0,0", "--r", "1", "--probes", "4", "--schedule", "0.1,0.05,0.025"},
      {"ortho", "--domain", "half-plane", "--from", "0,1", "--to", "0.6,1.5"},
      {"cusp", "--domain", "unit-ball", "--x", "0,0", "--r", "1", "--y", "0.6321205588285577,0", "--samples", "8"},
      {"renorm", "--domain", "unit-ball", "--r", "1", "--eval", "0.3,0.4", "--modulus", "convexity", "--budget", "4"},
      {"example", "prolongation", "--t", "0.5"},
      {"example", "l2-lengths"}};
  std::map<std::string, std::string> files;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const fs::path dir = root / std::to_string(k);
    fs::remove_all(dir);
    auto args = batch[k];
    args.push_back("--out-dir");
    args.push_back(dir.string());
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    files[std::to_string(k) + "/stdout"] = out.str() + "exit " + std::to_string(code);
    for (const auto& e : fs::directory_iterator(dir)) {
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      std::string content = ss.str();
      if (e.path().filename() == "manifest.json") {
        Json m = Json::parse(content);
        m.erase("wall_seconds");
        // The output directory differs between the two runs by construction.
        m.erase("arguments");
        content = m.dump();
      }
      files[std::to_string(k) + "/" + e.path().filename().string()] = content;
    }
  }
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "qh_acceptance_determinism";
  const auto a = run_batch(root / "a");
  progress("first batch done");
  const auto b = run_batch(root / "b");
  std::vector<std::string> differing;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || it->second != v) differing.push_back(k);
  }
  if (a.size() != b.size()) differing.push_back("(file sets differ)");
  fs::remove_all(root);
  std::string detail = std::to_string(a.size()) + " outputs over 9 commands compared byte for byte, " +
                       std::to_string(differing.size()) + " differ";
  for (const auto& d : differing) detail += " " + d;
  return {differing.empty() && a.size() > 9, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) expect_fail.insert(std::stoi(tok));
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
    } else {
      std::cerr << "usage: acceptance [--expect-fail 5,...] [--only 1,2,...]\n";
      return 64;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "punctured-plane distance", punctured_plane},
      {2, "half-plane oracle agreement", halfplane_oracle},
      {3, "polygon prolongation", polygon},
      {4, "omega_n multiplicity and intersections", omega_multiplicity},
      {5, "strip ball smoothness", smoothness},
      {6, "geodesic-sphere orthogonality", orthogonality},
      {7, "cusp-freeness", cusp},
      {9, "renorming", renorming},
      {10, "l2 half-circle lengths", l2_lengths},
      {11, "ball convexity", convexity},
      {12, "determinism", determinism},
      {8, "logarithmic lower bound", lower_bound},
  };

  reset_lower_bound_tally();
  const auto start = Clock::now();
  std::map<int, std::string> lines;
  std::set<int> failed;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = Clock::now();
    std::cerr << "criterion " << c.id << " (" << c.name << ") ..." << std::endl;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.passed) failed.insert(c.id);
    const std::string line = std::string(o.passed ? "PASS" : "FAIL") + "  " + std::to_string(c.id) + ". " + c.name +
                             ": " + o.detail + " [" + fmt(seconds_since(t0), 3) + " s]";
    std::cerr << line << std::endl;
    lines[c.id] = line;
  }

  std::cout << "acceptance summary\n";
  for (const auto& [id, line] : lines) std::cout << line << "\n";
  std::cout << "total " << fmt(seconds_since(start), 4) << " s\n";

  std::set<int> expected;
  for (int id : expect_fail)
    if (lines.count(id)) expected.insert(id);
  if (failed == expected) {
    if (!failed.empty()) {
      std::cout << "failing criteria match the documented expectation:";
      for (int id : failed) std::cout << " " << id;
      std::cout << "\n";
    }
    return 0;
  }
  std::cout << "unexpected outcome: failed {";
  for (int id : failed) std::cout << " " << id;
  std::cout << " }, expected {";
  for (int id : expected) std::cout << " " << id;
  std::cout << " }\n";
  return 1;
}
