#include "qh/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qh/errors.hpp"

namespace qh {

namespace {

// Collects schema issues while walking a document.
class Checker {
 public:
  std::vector<SchemaIssue> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back({path.empty() ? "/" : path, msg}); }

  bool object(const Json& j, const std::string& path, const std::set<std::string>& required,
              const std::set<std::string>& optional) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    bool ok = true;
    for (const auto& k : required)
      if (!j.contains(k)) {
        fail(path + "/" + k, "required field missing");
        ok = false;
      }
    for (const auto& [k, v] : j.items())
      if (!required.count(k) && !optional.count(k)) {
        fail(path + "/" + k, "unknown field");
        ok = false;
      }
    return ok;
  }

  std::optional<double> number(const Json& j, const std::string& path) {
    if (!j.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<int> integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) {
      fail(path, "expected an integer");
      return std::nullopt;
    }
    return j.get<int>();
  }

  std::optional<Point> point(const Json& j, const std::string& path, int dim) {
    if (!j.is_array()) {
      fail(path, "expected an array of coordinates");
      return std::nullopt;
    }
    if (static_cast<int>(j.size()) != dim) {
      fail(path, "expected " + std::to_string(dim) + " coordinates");
      return std::nullopt;
    }
    Point p(dim);
    for (int i = 0; i < dim; ++i) {
      const auto v = number(j[i], path + "/" + std::to_string(i));
      if (!v) return std::nullopt;
      p[i] = *v;
    }
    return p;
  }
};

std::optional<Primitive> parse_primitive(Checker& c, const Json& j, const std::string& path, int dim) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    c.fail(path + "/type", "expected a primitive type string");
    return std::nullopt;
  }
  const std::string type = j["type"].get<std::string>();
  const std::size_t before = c.issues.size();
  auto ok = [&] { return c.issues.size() == before; };
  if (type == "half-space") {
    if (!c.object(j, path, {"type", "normal", "offset"}, {})) return std::nullopt;
    const auto n = c.point(j["normal"], path + "/normal", dim);
    const auto o = c.number(j["offset"], path + "/offset");
    if (ok()) return HalfSpace{*n, *o};
  } else if (type == "ball") {
    if (!c.object(j, path, {"type", "center", "radius"}, {})) return std::nullopt;
    const auto ctr = c.point(j["center"], path + "/center", dim);
    const auto r = c.number(j["radius"], path + "/radius");
    if (r && !(*r > 0.0)) c.fail(path + "/radius", "must be positive");
    if (ok()) return OpenBall{*ctr, *r};
  } else if (type == "slab") {
    if (!c.object(j, path, {"type", "axis", "lower", "upper"}, {})) return std::nullopt;
    const auto a = c.integer(j["axis"], path + "/axis");
    const auto lo = c.number(j["lower"], path + "/lower");
    const auto hi = c.number(j["upper"], path + "/upper");
    if (a && (*a < 0 || *a >= dim)) c.fail(path + "/axis", "out of range");
    if (lo && hi && !(*lo < *hi)) c.fail(path + "/upper", "must exceed lower");
    if (ok()) return Slab{*a, *lo, *hi};
  } else if (type == "box") {
    if (!c.object(j, path, {"type", "lower", "upper"}, {})) return std::nullopt;
    const auto lo = c.point(j["lower"], path + "/lower", dim);
    const auto hi = c.point(j["upper"], path + "/upper", dim);
    if (ok()) return OpenBox{*lo, *hi};
  } else if (type == "polygon") {
    if (!c.object(j, path, {"type", "vertices"}, {})) return std::nullopt;
    if (!j["vertices"].is_array()) {
      c.fail(path + "/vertices", "expected an array of points");
      return std::nullopt;
    }
    Polygon poly;
    for (std::size_t i = 0; i < j["vertices"].size(); ++i)
      if (auto v = c.point(j["vertices"][i], path + "/vertices/" + std::to_string(i), dim)) poly.vertices.push_back(*v);
    if (ok()) return poly;
  } else if (type == "capsule") {
    if (!c.object(j, path, {"type", "origin", "direction", "radius"}, {})) return std::nullopt;
    const auto o = c.point(j["origin"], path + "/origin", dim);
    const auto d = c.point(j["direction"], path + "/direction", dim);
    const auto r = c.number(j["radius"], path + "/radius");
    if (r && !(*r > 0.0)) c.fail(path + "/radius", "must be positive");
    if (ok()) return Capsule{*o, *d, *r};
  } else {
    c.fail(path + "/type", "unknown primitive type '" + type + "'");
  }
  return std::nullopt;
}

std::optional<Removal> parse_removal(Checker& c, const Json& j, const std::string& path, int dim) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    c.fail(path + "/type", "expected a removal type string");
    return std::nullopt;
  }
  const std::string type = j["type"].get<std::string>();
  const std::size_t before = c.issues.size();
  auto ok = [&] { return c.issues.size() == before; };
  if (type == "point") {
    if (!c.object(j, path, {"type", "at"}, {})) return std::nullopt;
    const auto p = c.point(j["at"], path + "/at", dim);
    if (ok()) return RemovedPoint{*p};
  } else if (type == "segment") {
    if (!c.object(j, path, {"type", "a", "b"}, {})) return std::nullopt;
    const auto a = c.point(j["a"], path + "/a", dim);
    const auto b = c.point(j["b"], path + "/b", dim);
    if (ok()) return RemovedSegment{*a, *b};
  } else if (type == "ray") {
    if (!c.object(j, path, {"type", "origin", "direction"}, {})) return std::nullopt;
    const auto o = c.point(j["origin"], path + "/origin", dim);
    const auto d = c.point(j["direction"], path + "/direction", dim);
    if (ok()) return RemovedRay{*o, *d};
  } else if (type == "axis-point-family") {
    if (!c.object(j, path, {"type", "index"}, {"weight_n", "weight_next", "truncation"})) return std::nullopt;
    AxisPointFamily f;
    if (auto i = c.integer(j["index"], path + "/index")) {
      if (*i < 2) c.fail(path + "/index", "must be at least 2");
      f.index = *i;
    }
    if (j.contains("weight_n"))
      if (auto w = c.number(j["weight_n"], path + "/weight_n")) f.weight_n = *w;
    if (j.contains("weight_next"))
      if (auto w = c.number(j["weight_next"], path + "/weight_next")) f.weight_next = *w;
    if (j.contains("truncation"))
      if (auto t = c.integer(j["truncation"], path + "/truncation")) {
        if (*t < 0) c.fail(path + "/truncation", "must be non-negative");
        f.truncation = *t;
      }
    if (dim != 2) c.fail(path, "axis-point-family lives in a 2-D section");
    if (ok()) return f;
  } else {
    c.fail(path + "/type", "unknown removal type '" + type + "'");
  }
  return std::nullopt;
}

std::optional<NormSpec> parse_norm(Checker& c, const Json& j, const std::string& path) {
  if (!c.object(j, path, {"kind"}, {"p"})) return std::nullopt;
  if (!j["kind"].is_string()) {
    c.fail(path + "/kind", "expected a string");
    return std::nullopt;
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "euclidean") {
    if (j.contains("p")) c.fail(path + "/p", "only p-norm takes an exponent");
    return NormSpec{};
  }
  if (kind == "p-norm") {
    if (!j.contains("p")) {
      c.fail(path + "/p", "required field missing");
      return std::nullopt;
    }
    const auto p = c.number(j["p"], path + "/p");
    if (!p) return std::nullopt;
    if (!(*p > 1.0)) {
      c.fail(path + "/p", "exponent must exceed 1");
      return std::nullopt;
    }
    NormSpec n;
    n.kind = NormSpec::Kind::PNorm;
    n.p = *p;
    return n;
  }
  c.fail(path + "/kind", "unknown norm kind '" + kind + "'");
  return std::nullopt;
}

// Builds the domain or records why it cannot be built.
std::optional<DomainSpec> build(Checker& c, const Json& doc) {
  if (!doc.is_object()) {
    c.fail("", "expected an object");
    return std::nullopt;
  }
  if (doc.contains("preset")) {
    if (!c.object(doc, "", {"preset"}, {"n"})) return std::nullopt;
    if (!doc["preset"].is_string()) {
      c.fail("/preset", "expected a string");
      return std::nullopt;
    }
    int n = 3;
    if (doc.contains("n")) {
      const auto v = c.integer(doc["n"], "/n");
      if (!v) return std::nullopt;
      n = *v;
    }
    const std::string name = doc["preset"].get<std::string>();
    const auto names = presets::names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      c.fail("/preset", "unknown preset '" + name + "'");
      return std::nullopt;
    }
    try {
      return presets::by_name(name, n);
    } catch (const Error& e) {
      c.fail("/n", e.what());
      return std::nullopt;
    }
  }
  if (!c.object(doc, "", {"dimension", "primitives", "removals"}, {"norm", "name"})) return std::nullopt;
  const auto dim = c.integer(doc["dimension"], "/dimension");
  if (!dim) return std::nullopt;
  if (*dim < 2 || *dim > 3) {
    c.fail("/dimension", "must be 2 or 3");
    return std::nullopt;
  }
  NormSpec norm;
  if (doc.contains("norm"))
    if (auto n = parse_norm(c, doc["norm"], "/norm")) norm = *n;
  std::string name;
  if (doc.contains("name")) {
    if (doc["name"].is_string())
      name = doc["name"].get<std::string>();
    else
      c.fail("/name", "expected a string");
  }
  std::vector<Primitive> prims;
  std::vector<Removal> rems;
  if (!doc["primitives"].is_array())
    c.fail("/primitives", "expected an array");
  else
    for (std::size_t i = 0; i < doc["primitives"].size(); ++i)
      if (auto p = parse_primitive(c, doc["primitives"][i], "/primitives/" + std::to_string(i), *dim))
        prims.push_back(*p);
  if (!doc["removals"].is_array())
    c.fail("/removals", "expected an array");
  else
    for (std::size_t i = 0; i < doc["removals"].size(); ++i)
      if (auto r = parse_removal(c, doc["removals"][i], "/removals/" + std::to_string(i), *dim)) rems.push_back(*r);
  if (!c.issues.empty()) return std::nullopt;
  try {
    return DomainSpec(*dim, norm, std::move(prims), std::move(rems), name);
  } catch (const Error& e) {
    c.fail("", std::string("not a domain: ") + e.what());
    return std::nullopt;
  }
}

Json point_json(const Point& p) {
  Json a = Json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

Json path_json(const Polyline& path) {
  Json a = Json::array();
  for (const auto& v : path.vertices) a.push_back(point_json(v));
  return a;
}

void throw_issues(const std::vector<SchemaIssue>& issues) {
  std::string msg = "domain spec rejected:";
  for (const auto& i : issues) msg += "\n  " + i.path + ": " + i.message;
  throw SchemaError(msg);
}

}  // namespace

std::vector<SchemaIssue> domain_schema_issues(const Json& doc) {
  Checker c;
  build(c, doc);
  return c.issues;
}

DomainSpec domain_from_json(const Json& doc) {
  Checker c;
  auto d = build(c, doc);
  if (!d) throw_issues(c.issues);
  return std::move(*d);
}

DomainSpec parse_domain_spec(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("domain spec is not valid JSON: ") + e.what());
  }
  return domain_from_json(doc);
}

Json domain_to_json(const DomainSpec& d) {
  Json doc;
  doc["dimension"] = d.dimension();
  if (d.norm().kind == NormSpec::Kind::PNorm)
    doc["norm"] = {{"kind", "p-norm"}, {"p", d.norm().p}};
  else
    doc["norm"] = {{"kind", "euclidean"}};
  Json prims = Json::array();
  for (const auto& p : d.primitives()) {
    std::visit(
        [&](const auto& q) {
          using T = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<T, HalfSpace>)
            prims.push_back({{"type", "half-space"}, {"normal", point_json(q.normal)}, {"offset", q.offset}});
          else if constexpr (std::is_same_v<T, OpenBall>)
            prims.push_back({{"type", "ball"}, {"center", point_json(q.center)}, {"radius", q.radius}});
          else if constexpr (std::is_same_v<T, Slab>)
            prims.push_back({{"type", "slab"}, {"axis", q.axis}, {"lower", q.lower}, {"upper", q.upper}});
          else if constexpr (std::is_same_v<T, OpenBox>)
            prims.push_back({{"type", "box"}, {"lower", point_json(q.lower)}, {"upper", point_json(q.upper)}});
          else if constexpr (std::is_same_v<T, Polygon>)
            prims.push_back({{"type", "polygon"}, {"vertices", path_json(Polyline{q.vertices})}});
          else
            prims.push_back({{"type", "capsule"},
                             {"origin", point_json(q.origin)},
                             {"direction", point_json(q.direction)},
                             {"radius", q.radius}});
        },
        p);
  }
  Json rems = Json::array();
  for (const auto& r : d.removals()) {
    std::visit(
        [&](const auto& q) {
          using T = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<T, RemovedPoint>)
            rems.push_back({{"type", "point"}, {"at", point_json(q.at)}});
          else if constexpr (std::is_same_v<T, RemovedSegment>)
            rems.push_back({{"type", "segment"}, {"a", point_json(q.a)}, {"b", point_json(q.b)}});
          else if constexpr (std::is_same_v<T, RemovedRay>)
            rems.push_back({{"type", "ray"}, {"origin", point_json(q.origin)}, {"direction", point_json(q.direction)}});
          else
            rems.push_back({{"type", "axis-point-family"},
                            {"index", q.index},
                            {"weight_n", q.weight_n},
                            {"weight_next", q.weight_next},
                            {"truncation", q.truncation}});
        },
        r);
  }
  doc["primitives"] = prims;
  doc["removals"] = rems;
  if (!d.name().empty()) doc["name"] = d.name();
  return doc;
}

Json solver_to_json(const SolverConfig& s) {
  return {{"grid_resolution", s.grid_resolution},   {"grid_node_budget", s.grid_node_budget},
          {"max_iterations", s.max_iterations},     {"gradient_tol", s.gradient_tol},
          {"length_rel_tol", s.length_rel_tol},     {"vertex_budget", s.vertex_budget},
          {"seed_count", s.seed_count},             {"equal_length_rel_tol", s.equal_length_rel_tol},
          {"rng_seed", s.rng_seed}};
}

Json quadrature_to_json(const QuadratureConfig& q) {
  return {{"rule", q.rule == QuadratureConfig::Rule::Simpson ? "simpson" : "midpoint"},
          {"abs_tol", q.abs_tol},
          {"rel_tol", q.rel_tol},
          {"max_subdivisions", q.max_subdivisions}};
}

void apply_config(const Json& doc, SolverConfig& s, QuadratureConfig& q) {
  Checker c;
  if (!c.object(doc, "", {}, {"solver", "quadrature"})) throw_issues(c.issues);
  auto num = [&](const Json& obj, const std::string& path, const char* key, double& out) {
    if (obj.contains(key))
      if (auto v = c.number(obj[key], path + "/" + key)) out = *v;
  };
  auto integer = [&](const Json& obj, const std::string& path, const char* key, int& out) {
    if (obj.contains(key))
      if (auto v = c.integer(obj[key], path + "/" + key)) out = *v;
  };
  if (doc.contains("solver")) {
    const Json& j = doc["solver"];
    if (c.object(j, "/solver", {},
                 {"grid_resolution", "grid_node_budget", "max_iterations", "gradient_tol", "length_rel_tol",
                  "vertex_budget", "seed_count", "equal_length_rel_tol", "rng_seed"})) {
      num(j, "/solver", "grid_resolution", s.grid_resolution);
      integer(j, "/solver", "grid_node_budget", s.grid_node_budget);
      integer(j, "/solver", "max_iterations", s.max_iterations);
      num(j, "/solver", "gradient_tol", s.gradient_tol);
      num(j, "/solver", "length_rel_tol", s.length_rel_tol);
      integer(j, "/solver", "vertex_budget", s.vertex_budget);
      integer(j, "/solver", "seed_count", s.seed_count);
      num(j, "/solver", "equal_length_rel_tol", s.equal_length_rel_tol);
      if (j.contains("rng_seed")) {
        if (j["rng_seed"].is_number_unsigned())
          s.rng_seed = j["rng_seed"].get<std::uint64_t>();
        else
          c.fail("/solver/rng_seed", "expected a non-negative integer");
      }
    }
  }
  if (doc.contains("quadrature")) {
    const Json& j = doc["quadrature"];
    if (c.object(j, "/quadrature", {}, {"rule", "abs_tol", "rel_tol", "max_subdivisions"})) {
      if (j.contains("rule")) {
        const Json& r = j["rule"];
        if (r == "simpson")
          q.rule = QuadratureConfig::Rule::Simpson;
        else if (r == "midpoint")
          q.rule = QuadratureConfig::Rule::Midpoint;
        else
          c.fail("/quadrature/rule", "expected \"simpson\" or \"midpoint\"");
      }
      num(j, "/quadrature", "abs_tol", q.abs_tol);
      num(j, "/quadrature", "rel_tol", q.rel_tol);
      integer(j, "/quadrature", "max_subdivisions", q.max_subdivisions);
    }
  }
  if (!c.issues.empty()) throw_issues(c.issues);
  try {
    s.validate();
    q.validate();
  } catch (const Error& e) {
    throw SchemaError(std::string("configuration rejected: ") + e.what());
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw InvalidInput("csv: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        out += cells[i];
        continue;
      }
      out += '"';
      for (char ch : cells[i]) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

CsvTable path_csv(const Polyline& path) {
  CsvTable t;
  const int dim = path.size() ? path[0].dim() : 2;
  t.header = {"index", "x1", "x2"};
  if (dim == 3) t.header.push_back("x3");
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (int k = 0; k < dim; ++k) row.push_back(format_number(path[i][k]));
    t.add(std::move(row));
  }
  return t;
}

CsvTable contour_csv(const BallContour& contour) {
  CsvTable t;
  t.header = {"loop", "index", "x1", "x2"};
  for (std::size_t l = 0; l < contour.loops.size(); ++l)
    for (std::size_t i = 0; i < contour.loops[l].size(); ++i)
      t.add({std::to_string(l), std::to_string(i), format_number(contour.loops[l][i][0]),
             format_number(contour.loops[l][i][1])});
  return t;
}

Json geodesic_to_json(const GeodesicResult& g) {
  return {{"qh_length", g.qh_length},
          {"lower_bound_gap", g.lower_bound_gap},
          {"converged", g.converged},
          {"iterations", g.iterations},
          {"refinement_history", g.refinement_history},
          {"path", path_json(g.path)}};
}

Json verdict_to_json(const ExampleVerdict& v) {
  Json measured = Json::object();
  for (const auto& [k, x] : v.measured) measured[k] = x;
  Json checks = Json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"measured", c.measured},
                      {"threshold", c.threshold},
                      {"detail", c.detail},
                      {"informational", c.informational}});
  Json paths = Json::array();
  for (const auto& [label, p] : v.paths) paths.push_back({{"label", label}, {"vertices", path_json(p)}});
  return {{"id", v.id}, {"claim", v.claim}, {"passed", v.passed}, {"measured", measured}, {"checks", checks},
          {"paths", paths}};
}

namespace {

class Canvas {
 public:
  Canvas(std::array<double, 4> w, std::array<int, 2> plane) : w_(w), plane_(plane) {
    const double span_x = w[2] - w[0], span_y = w[3] - w[1];
    scale_ = kWidth / span_x;
    height_ = span_y * scale_;
  }

  double height() const { return height_ + 2 * kMargin; }
  double width() const { return kWidth + 2 * kMargin; }
  double sx(double x) const { return kMargin + (x - w_[0]) * scale_; }
  double sy(double y) const { return kMargin + (w_[3] - y) * scale_; }
  double px(const Point& p) const { return sx(p[plane_[0]]); }
  double py(const Point& p) const { return sy(p[plane_[1]]); }
  double len(double l) const { return l * scale_; }
  const std::array<double, 4>& window() const { return w_; }
  const std::array<int, 2>& plane() const { return plane_; }

  static constexpr double kWidth = 800.0;
  static constexpr double kMargin = 20.0;

 private:
  std::array<double, 4> w_;
  std::array<int, 2> plane_;
  double scale_ = 1.0;
  double height_ = 0.0;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", std::abs(v) < 5e-5 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<')
      out += "&lt;";
    else if (ch == '>')
      out += "&gt;";
    else if (ch == '&')
      out += "&amp;";
    else
      out += ch;
  }
  return out;
}

void line(std::ostringstream& os, const Canvas& c, double x0, double y0, double x1, double y1, const std::string& style) {
  os << "<line x1=\"" << num(c.sx(x0)) << "\" y1=\"" << num(c.sy(y0)) << "\" x2=\"" << num(c.sx(x1)) << "\" y2=\""
     << num(c.sy(y1)) << "\" " << style << "/>\n";
}

// The line {p : n . p = offset} across the window.
void hyperplane(std::ostringstream& os, const Canvas& c, double nx, double ny, double offset, const std::string& style) {
  const auto& w = c.window();
  const double big = 4.0 * std::max(w[2] - w[0], w[3] - w[1]) + std::abs(offset);
  const double nn = std::hypot(nx, ny);
  const double px = nx * offset / (nn * nn), py = ny * offset / (nn * nn);
  const double tx = -ny / nn, ty = nx / nn;
  line(os, c, px - big * tx, py - big * ty, px + big * tx, py + big * ty, style);
}

void outline(std::ostringstream& os, const Canvas& c, const DomainSpec& d) {
  const std::string style = "stroke=\"#000000\" stroke-width=\"1.5\" fill=\"none\"";
  const int a = c.plane()[0], b = c.plane()[1];
  for (const auto& prim : d.primitives()) {
    if (const auto* h = std::get_if<HalfSpace>(&prim)) {
      hyperplane(os, c, h->normal[a], h->normal[b], h->offset, style);
    } else if (const auto* ball = std::get_if<OpenBall>(&prim)) {
      if (d.norm().is_euclidean()) {
        os << "<circle cx=\"" << num(c.px(ball->center)) << "\" cy=\"" << num(c.py(ball->center)) << "\" r=\""
           << num(c.len(ball->radius)) << "\" " << style << "/>\n";
      } else {
        os << "<polygon points=\"";
        const double p = d.norm().p;
        for (int k = 0; k < 256; ++k) {
          const double th = 2.0 * std::acos(-1.0) * k / 256;
          const double cx = std::cos(th), cy = std::sin(th);
          const double n = std::pow(std::pow(std::abs(cx), p) + std::pow(std::abs(cy), p), 1.0 / p);
          os << (k ? " " : "") << num(c.sx(ball->center[a] + ball->radius * cx / n)) << ","
             << num(c.sy(ball->center[b] + ball->radius * cy / n));
        }
        os << "\" " << style << "/>\n";
      }
    } else if (const auto* s = std::get_if<Slab>(&prim)) {
      if (s->axis != a && s->axis != b) continue;
      const double nx = s->axis == a ? 1.0 : 0.0, ny = s->axis == b ? 1.0 : 0.0;
      hyperplane(os, c, nx, ny, s->lower, style);
      hyperplane(os, c, nx, ny, s->upper, style);
    } else if (const auto* box = std::get_if<OpenBox>(&prim)) {
      os << "<rect x=\"" << num(c.sx(box->lower[a])) << "\" y=\"" << num(c.sy(box->upper[b])) << "\" width=\""
         << num(c.len(box->upper[a] - box->lower[a])) << "\" height=\"" << num(c.len(box->upper[b] - box->lower[b]))
         << "\" " << style << "/>\n";
    } else if (const auto* poly = std::get_if<Polygon>(&prim)) {
      os << "<polygon points=\"";
      for (std::size_t k = 0; k < poly->vertices.size(); ++k)
        os << (k ? " " : "") << num(c.px(poly->vertices[k])) << "," << num(c.py(poly->vertices[k]));
      os << "\" " << style << "/>\n";
    } else if (const auto* cap = std::get_if<Capsule>(&prim)) {
      // Projected outline: the axis shifted by +-radius plus the end cap.
      const Point& o = cap->origin;
      const double dx = cap->direction[a], dy = cap->direction[b];
      const double dn = std::hypot(dx, dy);
      os << "<circle cx=\"" << num(c.px(o)) << "\" cy=\"" << num(c.py(o)) << "\" r=\"" << num(c.len(cap->radius))
         << "\" " << style << " stroke-dasharray=\"4 3\"/>\n";
      if (dn > 0) {
        const double ux = dx / dn, uy = dy / dn, big = 1e3;
        for (int sgn : {-1, 1})
          line(os, c, o[a] - sgn * uy * cap->radius, o[b] + sgn * ux * cap->radius,
               o[a] - sgn * uy * cap->radius + big * ux, o[b] + sgn * ux * cap->radius + big * uy, style);
      }
    }
  }
  const std::string removal = "stroke=\"#000000\" stroke-width=\"2.5\"";
  for (const auto& r : d.removals()) {
    if (const auto* p = std::get_if<RemovedPoint>(&r)) {
      os << "<circle cx=\"" << num(c.px(p->at)) << "\" cy=\"" << num(c.py(p->at)) << "\" r=\"3.0000\" fill=\"#000000\"/>\n";
    } else if (const auto* s = std::get_if<RemovedSegment>(&r)) {
      line(os, c, s->a[a], s->a[b], s->b[a], s->b[b], removal);
    } else if (const auto* ray = std::get_if<RemovedRay>(&r)) {
      const double big = 1e3;
      line(os, c, ray->origin[a], ray->origin[b], ray->origin[a] + big * ray->direction[a],
           ray->origin[b] + big * ray->direction[b], removal);
    } else if (const auto* f = std::get_if<AxisPointFamily>(&r)) {
      os << "<circle cx=\"" << num(c.sx(0.0)) << "\" cy=\"" << num(c.sy(0.0)) << "\" r=\"3.0000\" fill=\"#000000\"/>\n";
      if (f->weight_next == 0.0 && f->weight_n != 0.0) {
        const double v = std::sqrt(2.0) * (1.0 - 1.0 / f->index) / f->weight_n;
        for (int sgn : {-1, 1})
          os << "<circle cx=\"" << num(c.sx(0.0)) << "\" cy=\"" << num(c.sy(sgn * v))
             << "\" r=\"3.0000\" fill=\"#000000\"/>\n";
      }
    }
  }
}

}  // namespace

std::string render_svg(const SvgScene& scene) {
  int dim = scene.domain ? scene.domain->dimension() : 2;
  for (const auto& layer : scene.layers)
    for (const auto& p : layer.paths)
      if (p.size()) dim = std::max(dim, p[0].dim());
  if (dim == 3 && !scene.plane) throw RenderError("render_svg: 3-D artifacts need a plane selection");
  const std::array<int, 2> plane = scene.plane.value_or(std::array<int, 2>{0, 1});
  if (plane[0] == plane[1] || plane[0] < 0 || plane[1] < 0 || plane[0] >= dim || plane[1] >= dim)
    throw RenderError("render_svg: invalid plane selection");

  std::array<double, 4> w{};
  if (scene.window) {
    w = *scene.window;
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    double lo[2] = {inf, inf}, hi[2] = {-inf, -inf};
    for (const auto& layer : scene.layers)
      for (const auto& p : layer.paths)
        for (const auto& v : p.vertices)
          for (int k = 0; k < 2; ++k) {
            lo[k] = std::min(lo[k], v[plane[k]]);
            hi[k] = std::max(hi[k], v[plane[k]]);
          }
    for (int k = 0; k < 2; ++k) {
      double dlo = -4.0, dhi = 4.0;
      if (scene.domain) {
        const auto& b = scene.domain->bounds();
        if (std::isfinite(b.lower[plane[k]])) dlo = b.lower[plane[k]];
        if (std::isfinite(b.upper[plane[k]])) dhi = b.upper[plane[k]];
      }
      if (!(lo[k] <= hi[k])) {
        lo[k] = std::max(dlo, -2.0);
        hi[k] = std::min(dhi, 2.0);
      }
      // Show the whole bounded extent, or one unit of context around the artifacts.
      lo[k] = std::max(std::min(lo[k] - 1.0, dlo), lo[k] - 4.0);
      hi[k] = std::min(std::max(hi[k] + 1.0, dhi), hi[k] + 4.0);
      const double pad = 0.05 * (hi[k] - lo[k]);
      lo[k] -= pad;
      hi[k] += pad;
    }
    w = {lo[0], lo[1], hi[0], hi[1]};
  }
  if (!(w[2] > w[0] && w[3] > w[1]) || !std::isfinite(w[0] + w[1] + w[2] + w[3]))
    throw RenderError("render_svg: empty or non-finite window");

  const Canvas c(w, plane);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(c.width()) << "\" height=\"" << num(c.height())
     << "\" viewBox=\"0 0 " << num(c.width()) << " " << num(c.height()) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  os << "<clipPath id=\"frame\"><rect x=\"" << num(Canvas::kMargin) << "\" y=\"" << num(Canvas::kMargin)
     << "\" width=\"" << num(c.width() - 2 * Canvas::kMargin) << "\" height=\"" << num(c.height() - 2 * Canvas::kMargin)
     << "\"/></clipPath>\n<g clip-path=\"url(#frame)\">\n";
  if (scene.domain) outline(os, c, *scene.domain);
  for (const auto& layer : scene.layers) {
    os << "<g>\n";
    for (const auto& p : layer.paths) {
      if (layer.points) {
        for (const auto& v : p.vertices)
          os << "<circle cx=\"" << num(c.px(v)) << "\" cy=\"" << num(c.py(v)) << "\" r=\"2.0000\" fill=\"" << layer.color
             << "\"/>\n";
        continue;
      }
      os << "<polyline points=\"";
      for (std::size_t k = 0; k < p.size(); ++k) os << (k ? " " : "") << num(c.px(p[k])) << "," << num(c.py(p[k]));
      os << "\" fill=\"none\" stroke=\"" << layer.color << "\" stroke-width=\"" << num(layer.width) << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</g>\n";
  double y = Canvas::kMargin + 16.0;
  if (!scene.title.empty()) {
    os << "<text x=\"" << num(Canvas::kMargin + 6) << "\" y=\"" << num(y)
       << "\" font-family=\"sans-serif\" font-size=\"14\">" << escape(scene.title) << "</text>\n";
    y += 18.0;
  }
  for (const auto& layer : scene.layers) {
    if (layer.label.empty()) continue;
    os << "<line x1=\"" << num(Canvas::kMargin + 6) << "\" y1=\"" << num(y - 4) << "\" x2=\"" << num(Canvas::kMargin + 26)
       << "\" y2=\"" << num(y - 4) << "\" stroke=\"" << layer.color << "\" stroke-width=\"2.0000\"/>\n";
    os << "<text x=\"" << num(Canvas::kMargin + 32) << "\" y=\"" << num(y)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(layer.label) << "</text>\n";
    y += 16.0;
  }
  os << "</svg>\n";
  return os.str();
}

Json RunManifest::to_json() const {
  return {{"command", command}, {"arguments", arguments}, {"config", config},     {"rng_seed", rng_seed},
          {"version", version}, {"input_hash", input_hash}, {"outputs", outputs}, {"wall_seconds", wall_seconds}};
}

std::string toolkit_version() { return "0.1.0"; }

std::string content_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InvalidInput("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidInput("cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace qh
