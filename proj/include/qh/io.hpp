#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qh/ball.hpp"
#include "qh/examples.hpp"
#include "qh/metric.hpp"

namespace qh {

using Json = nlohmann::ordered_json;

struct SchemaIssue {
  std::string path;  // JSON pointer of the offending field
  std::string message;
};

/// Schema problems of a domain document; empty when valid. A document is either
/// {"preset": name, "n"?: int} or {"dimension", "norm"?, "primitives", "removals", "name"?}.
std::vector<SchemaIssue> domain_schema_issues(const Json& doc);

/// Validated domain. Throws SchemaError listing every issue (syntax errors, schema violations,
/// and constructions the domain rules reject).
DomainSpec parse_domain_spec(const std::string& text);
DomainSpec domain_from_json(const Json& doc);
/// Explicit (non-preset) form; parse(serialize(d)) reproduces d.
Json domain_to_json(const DomainSpec& domain);

Json solver_to_json(const SolverConfig& s);
Json quadrature_to_json(const QuadratureConfig& q);
/// Overrides fields present in `doc` ({"solver": {...}, "quadrature": {...}}); unknown fields
/// are schema errors.
void apply_config(const Json& doc, SolverConfig& s, QuadratureConfig& q);

/// 17 significant digits: round-trips every double.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string str() const;
};
CsvTable path_csv(const Polyline& path);
CsvTable contour_csv(const BallContour& contour);

Json geodesic_to_json(const GeodesicResult& g);
Json verdict_to_json(const ExampleVerdict& v);

struct SvgLayer {
  std::string label;
  std::vector<Polyline> paths;
  std::string color = "#1f77b4";
  double width = 1.5;
  bool points = false;  // draw vertices as dots instead of a line
};

struct SvgScene {
  std::optional<DomainSpec> domain;
  /// Visible window; defaults to the domain bounds clipped to [-4, 4]^2 around the layers.
  std::optional<std::array<double, 4>> window;  // xmin, ymin, xmax, ymax
  /// Coordinate axes shown for 3-D artifacts; required when any artifact is 3-D.
  std::optional<std::array<int, 2>> plane;
  std::vector<SvgLayer> layers;
  std::string title;
};

/// Deterministic SVG: domain outline and removals, then layers in order, then a legend.
/// Coordinates are rounded to 1e-4 canvas units. Throws RenderError for 3-D artifacts without
/// a plane selection.
std::string render_svg(const SvgScene& scene);

struct RunManifest {
  std::string command;
  Json arguments = Json::object();
  Json config = Json::object();
  std::uint64_t rng_seed = 1;
  std::string version;
  std::string input_hash;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;

  Json to_json() const;
};

std::string toolkit_version();
/// FNV-1a 64-bit hash, hex encoded.
std::string content_hash(const std::string& text);

/// Writes to a temporary sibling file and renames it over `path`.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace qh
