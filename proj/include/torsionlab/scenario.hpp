#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "torsionlab/foliate.hpp"
#include "torsionlab/genfunc.hpp"
#include "torsionlab/indices.hpp"
#include "torsionlab/rotation.hpp"

namespace torsionlab {

using Json = nlohmann::ordered_json;

enum class ScenarioKind { GenFunc, ExplicitIsotopy, AnnulusMap, SphereShear, PiecewiseFlow };

const char* to_string(ScenarioKind k);

/// An expected value for one operation result.
struct Claim {
  std::string description;
  std::string operation;
  std::vector<Json> calls;  // argument sets; more than one are summed
  std::string field;        // JSON pointer, "*" maps over arrays
  std::string check;        // equals | all_equal | contains_points | abs_at_least | within
  Json expected;
  double tolerance = 0.0;
  std::string provenance;   // published | closed-form | definition
};

struct TwistSetup {
  PlanarMap lift;
  double y_center = 0.0;
  double half_width = 0.0;
};

/// A validated scenario together with the objects it defines. Cylinder
/// scenarios live on R/Z x [0, 1] with ends S (y = 0) and N (y = 1).
struct Scenario {
  Json document;
  std::string name;
  ScenarioKind kind = ScenarioKind::GenFunc;
  Rect region{-1.0, 1.0, -1.0, 1.0};
  bool cylinder = false;
  std::optional<GenIsotopy> gen;
  PlanarIsotopy isotopy;
  std::vector<std::pair<std::string, Foliation>> foliations;
  std::optional<PlanarMap> lift;
  std::optional<TwistSetup> twist;
  Json presets = Json::object();
  std::vector<Claim> claims;
};

/// Parses scenario text (JSON syntax, schema 1). Throws SchemaError with a
/// line/column position for malformed input.
Scenario parse_scenario(std::string_view text);
Scenario build_scenario(const Json& doc);

const std::vector<std::string>& operation_names();

/// Runs one named operation. Arguments override the scenario presets.
Json run_operation(const Scenario& s, const std::string& op, const Json& args);

struct ClaimResult {
  const Claim* claim = nullptr;
  Json computed;
  bool pass = false;
  std::string error;
};

ClaimResult run_claim(const Scenario& s, const Claim& c);
Json claim_to_json(const Claim& c);

/// Sphere end charts: S uses w = y e^{-2 pi i x}, N uses w = (1 - y) e^{2 pi i x}.
enum class End { S, N };
Vec2 to_chart(End e, Vec2 cyl);
Vec2 from_chart(End e, Vec2 w);
PlanarIsotopy chart_isotopy(const PlanarIsotopy& cyl, End e);
Foliation chart_foliation(const Foliation& cyl, End e);

/// Plane model of an annulus lift on R x (-inf, 0): the cover isotopy
/// z + t (L(z) - z) pushed down by (theta, y) -> -y e^{2 pi i theta}.
PlanarIsotopy annulus_plane_isotopy(const PlanarMap& lift);

}  // namespace torsionlab
