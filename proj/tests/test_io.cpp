#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qh/cli.hpp"
#include "qh/errors.hpp"
#include "qh/io.hpp"

using namespace qh;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qh_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("presets through the schema") {
  const DomainSpec d = parse_domain_spec(R"({"preset": "punctured-plane"})");
  CHECK(d.dimension() == 2);
  CHECK(d.removals().size() == 1);
  const DomainSpec o = parse_domain_spec(R"({"preset": "omega-n", "n": 5})");
  CHECK(domain_to_json(o) == domain_to_json(presets::omega_n(5)));
}

TEST_CASE("schema errors name the field") {
  const std::string bad_p =
      R"({"dimension": 2, "norm": {"kind": "p-norm", "p": 1}, "primitives": [{"type": "slab", "axis": 1, "lower": -1, "upper": 1}], "removals": []})";
  const auto issues = domain_schema_issues(Json::parse(bad_p));
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].path == "/norm/p");
  try {
    parse_domain_spec(bad_p);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("/norm/p") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_domain_spec("{\"preset\": "), SchemaError);
  CHECK_FALSE(domain_schema_issues(Json::parse(R"({"preset": "strip", "colour": "red"})")).empty());
  CHECK_FALSE(domain_schema_issues(Json::parse(R"({"dimension": 2, "primitives": [{"type": "blob"}], "removals": []})")).empty());
  // Parallel slabs that exclude each other leave nothing.
  CHECK_THROWS_AS(parse_domain_spec(R"({"dimension": 2, "primitives": [{"type": "slab", "axis": 1, "lower": 0, "upper": 1},
      {"type": "slab", "axis": 1, "lower": 2, "upper": 3}], "removals": []})"),
                  SchemaError);
}

TEST_CASE("explicit form round-trips") {
  for (const auto& name : {"polygon-P", "starlike3d", "l2-section", "strip"}) {
    const DomainSpec d = presets::by_name(name, 4);
    const Json j = domain_to_json(d);
    CHECK(domain_to_json(parse_domain_spec(j.dump())) == j);
  }
}

TEST_CASE("numbers and tables") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::strtod(format_number(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
  CsvTable t;
  t.header = {"a", "b"};
  t.add({"1", "2"});
  CHECK(t.str() == "a,b\n1,2\n");
  CHECK_THROWS(t.add({"1"}));
}

TEST_CASE("configuration overrides") {
  SolverConfig s;
  QuadratureConfig q;
  apply_config(Json::parse(R"({"solver": {"vertex_budget": 32}, "quadrature": {"rule": "midpoint"}})"), s, q);
  CHECK(s.vertex_budget == 32);
  CHECK(q.rule == QuadratureConfig::Rule::Midpoint);
  CHECK_THROWS_AS(apply_config(Json::parse(R"({"solver": {"speed": 3}})"), s, q), SchemaError);
  CHECK(solver_to_json(s)["vertex_budget"] == 32);
}

TEST_CASE("svg rendering is deterministic") {
  SvgScene scene;
  scene.domain = presets::polygon_p();
  scene.layers.push_back({"path", {Polyline{{Point{-1.5, 0.0}, Point{-1.0, 0.0}}}}});
  const std::string a = render_svg(scene), b = render_svg(scene);
  CHECK(a == b);
  CHECK(a.rfind("<svg", 0) == 0);
  SvgScene empty;
  empty.domain = presets::strip();
  CHECK(render_svg(empty).find("<line") != std::string::npos);
  SvgScene solid;
  solid.domain = presets::starlike3d();
  CHECK_THROWS_AS(render_svg(solid), RenderError);
  solid.plane = std::array<int, 2>{0, 2};
  CHECK_NOTHROW(render_svg(solid));
}

TEST_CASE("atomic writes and hashes") {
  const fs::path dir = scratch_dir("atomic");
  atomic_write((dir / "a.txt").string(), "first");
  atomic_write((dir / "a.txt").string(), "second");
  CHECK(slurp(dir / "a.txt") == "second");
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
  CHECK(content_hash("abc") == content_hash("abc"));
  CHECK(content_hash("abc") != content_hash("abd"));
  CHECK(content_hash("").size() == 16);
}

TEST_CASE("exit codes") {
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"dist", "--domain", "strip"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitPass);

  const Run ok = run({"dist", "--domain", "punctured-plane", "--from", "-1,0", "--to", "1,0"});
  CHECK(ok.code == kExitPass);
  CHECK(ok.out.find("k = 3.14") != std::string::npos);

  CHECK(run({"dist", "--domain", "missing.json", "--from", "0,0", "--to", "1,0"}).code == kExitError);
  CHECK(run({"dist", "--domain", "strip", "--from", "0,0,0", "--to", "1,0"}).code == kExitError);
  CHECK(run({"dist", "--domain", "strip", "--from", "0,5", "--to", "1,0"}).code == kExitError);
  CHECK(run({"ortho", "--domain", "half-plane", "--from", "0,1", "--to", "0.6,1.5", "--t", "1.5"}).code == kExitError);

  // Property failures report 1, never 2.
  const Run strict = run({"smoothcheck", "--domain", "strip", "--center", "0,0", "--r", "1", "--probes", "2",
                          "--schedule", "0.1,0.05", "--max-ratio", "0"});
  CHECK(strict.code == kExitVerdictFail);
  CHECK(strict.out.find("verdict = fail") != std::string::npos);
  CHECK(run({"ortho", "--domain", "half-plane", "--from", "0,1", "--to", "0.6,1.5", "--band", "-1"}).code ==
        kExitVerdictFail);
}

TEST_CASE("outputs, manifest and reproducibility") {
  const fs::path a = scratch_dir("run_a"), b = scratch_dir("run_b");
  const fs::path spec = a / "domain.json";
  atomic_write(spec.string(), domain_to_json(presets::half_plane()).dump());
  for (const auto& dir : {a, b}) {
    const Run r = run({"geodesic", "--domain", spec.string(), "--from", "0,1", "--to", "2,1", "--out-dir", dir.string()});
    REQUIRE(r.code == kExitPass);
  }
  for (const auto& name : {"geodesic.json", "geodesic.csv", "geodesic.svg"}) {
    CHECK(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  const Json m = Json::parse(slurp(a / "manifest.json"));
  CHECK(m["command"] == "geodesic");
  CHECK(m["version"] == toolkit_version());
  CHECK(m["input_hash"] == content_hash(domain_to_json(presets::half_plane()).dump()));
  CHECK(m["outputs"].size() == 3);
  CHECK(m["config"].contains("solver"));
}
