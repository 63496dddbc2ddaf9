#include "torsionlab/fixtures.hpp"

#include <algorithm>
#include <map>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

const char* const kEx1 = R"json({
  "schema": 1,
  "name": "ex1_homothety",
  "description": "f_t = (1 + t) id with two foliations pushed down from cover lines",
  "kind": "ExplicitIsotopy",
  "isotopy": {"x": "(1 + t) * x", "y": "(1 + t) * y"},
  "region": [-1, 1, -1, 1],
  "foliations": {
    "F1": {"x": "-2 * pi * sqrt(x^2 + y^2) * y - x", "y": "2 * pi * sqrt(x^2 + y^2) * x - y"},
    "F2": {"x": "-2 * pi * sqrt(x^2 + y^2) * y + x", "y": "2 * pi * sqrt(x^2 + y^2) * x + y"}
  },
  "claims": [
    {"description": "i(f, 0) = sign det(2I - I) = 1", "operation": "lefschetz",
     "arguments": {"at": [0, 0], "radius": 0.5}, "field": "/index", "check": "equals",
     "expected": 1, "provenance": "closed-form"},
    {"description": "the homothety isotopy has index 0 at 0", "operation": "isotopy-index",
     "arguments": {"at": [0, 0], "radius": 0.5}, "field": "/index", "check": "equals",
     "expected": 0, "provenance": "published"},
    {"description": "0 is a sink of F1", "operation": "foliation-index",
     "arguments": {"at": [0, 0], "radius": 0.5, "with": "F1"}, "field": "/class", "check": "equals",
     "expected": "Sink", "provenance": "published"},
    {"description": "0 is a source of F2", "operation": "foliation-index",
     "arguments": {"at": [0, 0], "radius": 0.5, "with": "F2"}, "field": "/class", "check": "equals",
     "expected": "Source", "provenance": "published"},
    {"description": "trajectories cross F1 positively", "operation": "transversality",
     "arguments": {"with": "F1", "points": [[0.3, 0.1], [-0.2, 0.25], [0.05, -0.4], [-0.3, -0.3]]},
     "field": "/verdict", "check": "equals", "expected": "PositivelyTransverse", "provenance": "published"},
    {"description": "trajectories cross F2 positively", "operation": "transversality",
     "arguments": {"with": "F2", "points": [[0.3, 0.1], [-0.2, 0.25], [0.05, -0.4], [-0.3, -0.3]]},
     "field": "/verdict", "check": "equals", "expected": "PositivelyTransverse", "provenance": "published"},
    {"description": "i(F1) = i(I) + 1", "operation": "index-relation",
     "arguments": {"at": [0, 0], "radius": 0.5, "with": "F1"}, "field": "/foliation_relation",
     "check": "equals", "expected": true, "provenance": "published"}
  ]
})json";

const char* const kEx2 = R"json({
  "schema": 1,
  "name": "ex2_piecewise_flow",
  "description": "flow of a quadrant-wise field V with the transverse field xi",
  "kind": "PiecewiseFlow",
  "builtin": "quadrant_flow",
  "region": [-1, 1, -1, 1],
  "claims": [
    {"description": "xi has index 1 at its unique zero", "operation": "foliation-index",
     "arguments": {"at": [0, 0], "radius": 0.5}, "field": "/foliation_index", "check": "equals",
     "expected": 1, "provenance": "published"},
    {"description": "flow lines cross the xi foliation positively", "operation": "transversality",
     "arguments": {"isotopy": "natural", "steps": 128,
                   "points": [[0.3, 0.4], [0.5, 0.05], [-0.3, 0.2], [-0.25, -0.35], [0.4, -0.2]]},
     "field": "/verdict", "check": "equals", "expected": "PositivelyTransverse", "provenance": "published"},
    {"description": "i(F1) = i(I) + 1", "operation": "index-relation",
     "arguments": {"at": [0, 0], "radius": 0.5}, "field": "/foliation_relation",
     "check": "equals", "expected": true, "provenance": "published"}
  ]
})json";

const char* const kEx3 = R"json({
  "schema": 1,
  "name": "ex3_annulus_escape",
  "description": "annulus twist (x - 1/y, y) compactified by a point star at the upper end",
  "kind": "AnnulusMap",
  "lift": {"x": "x - 1 / y", "y": "y"},
  "region": [-1, 1, -1, 1],
  "presets": {"rotation-set": {"at": "star", "r0": 0.05, "levels": 3, "n_max": 16, "threshold": 10}},
  "claims": [
    {"description": "deep-level rotation samples escape past the threshold", "operation": "rotation-set",
     "arguments": {"at": "star"}, "field": "/hi_pos_infinite", "check": "equals",
     "expected": true, "provenance": "published"},
    {"description": "every deep-level sample has |rho_n| >= 10", "operation": "rotation-set",
     "arguments": {"at": "star"}, "field": "/samples/*/rho", "check": "abs_at_least",
     "expected": 10, "provenance": "published"}
  ]
})json";

const char* const kEx4 = R"json({
  "schema": 1,
  "name": "ex4_sphere_3shear",
  "description": "cylinder map (x + 3y, phi(y)) with ends S and N collapsed",
  "kind": "SphereShear",
  "lift": {"x": "x + 3 * y",
           "y": "select(y <= 1/6, y, select(y >= 5/6, y, y - 0.05 * (9 * (y - 1/6) * (5/6 - y))^3))"},
  "region": [0, 1, 0, 1],
  "claims": [
    {"description": "rotation number at S is 0", "operation": "rotation-set",
     "arguments": {"at": "S"}, "field": "/lo", "check": "equals", "expected": 0,
     "tolerance": 1e-9, "provenance": "closed-form"},
    {"description": "rotation number at N is 3", "operation": "rotation-set",
     "arguments": {"at": "N"}, "field": "/hi", "check": "equals", "expected": 3,
     "tolerance": 1e-9, "provenance": "closed-form"},
    {"description": "rotation numbers at S and N sum to 3", "operation": "rotation-set",
     "arguments": [{"at": "S"}, {"at": "N"}], "field": "/lo", "check": "equals", "expected": 3,
     "tolerance": 1e-9, "provenance": "published"},
    {"description": "the isotopy is not torsion-low at N", "operation": "torsion-low",
     "arguments": {"at": "N"}, "field": "/classification", "check": "equals",
     "expected": "NotTorsionLow", "provenance": "closed-form"}
  ]
})json";

const char* const kEx5 = R"json({
  "schema": 1,
  "name": "ex5_sin2_genfunc",
  "description": "generating function int_0^y s sin^2(pi/s) + phi(s) sin^2(pi x) ds on the cylinder",
  "kind": "GenFunc",
  "builtin": "sin2_generating_function",
  "twist_bound": 0.5,
  "cylinder": true,
  "region": [0, 1, 0, 1],
  "presets": {"critical-points": {"region": [-0.1, 0.1, 0.22, 0.6], "grid": 96, "classify_radius": 0.01}},
  "claims": [
    {"description": "critical points at (0, 1/2), (0, 1/3), (0, 1/4)", "operation": "critical-points",
     "arguments": {}, "field": "/points/*/location", "check": "contains_points",
     "expected": [[0, 0.5], [0, 0.3333333333333333], [0, 0.25]], "tolerance": 1e-6,
     "provenance": "published"},
    {"description": "those points are saddles of the gradient foliation", "operation": "critical-points",
     "arguments": {}, "field": "/points/*/foliation_class", "check": "all_equal",
     "expected": "Saddle", "provenance": "published"},
    {"description": "d2g >= 0 so i(f, (0, 1/2)) = 0", "operation": "lefschetz",
     "arguments": {"at": [0, 0.5], "radius": 0.02}, "field": "/index", "check": "equals",
     "expected": 0, "provenance": "closed-form"},
    {"description": "N is a sink of the gradient foliation", "operation": "foliation-index",
     "arguments": {"at": "N", "radius": 0.1}, "field": "/class", "check": "equals",
     "expected": "Sink", "provenance": "published"},
    {"description": "rotation set at S is {0}", "operation": "rotation-set",
     "arguments": {"at": "S"}, "field": "/samples/*/rho", "check": "within",
     "expected": [0, 0], "tolerance": 1e-9, "provenance": "published"},
    {"description": "two-phase trajectories cross the gradient foliation positively",
     "operation": "transversality",
     "arguments": {"isotopy": "alternate",
                   "points": [[0.2, 0.3], [0.7, 0.45], [0.45, 0.8], [0.1, 0.6], [0.85, 0.15]]},
     "field": "/verdict", "check": "equals", "expected": "PositivelyTransverse", "provenance": "published"}
  ]
})json";

const char* const kEx6 = R"json({
  "schema": 1,
  "name": "ex6_threeband_shear",
  "description": "cylinder map x / x + 3y - 1 / x + 1 on three bands",
  "kind": "SphereShear",
  "lift": {"x": "select(y <= 1/3, x, select(y <= 2/3, x + 3 * y - 1, x + 1))", "y": "y"},
  "region": [0, 1, 0, 1],
  "twist": {"lift": {"x": "x + 3 * y - 1", "y": "y"}, "center": 0.3333333333333333,
            "half_width": 0.16666666666666666},
  "claims": [
    {"description": "rotation number at S is 0", "operation": "rotation-set",
     "arguments": {"at": "S"}, "field": "/lo", "check": "equals", "expected": 0,
     "tolerance": 1e-9, "provenance": "closed-form"},
    {"description": "rotation number at N is 1", "operation": "rotation-set",
     "arguments": {"at": "N"}, "field": "/hi", "check": "equals", "expected": 1,
     "tolerance": 1e-9, "provenance": "closed-form"},
    {"description": "rotation numbers at S and N sum to 1", "operation": "rotation-set",
     "arguments": [{"at": "S"}, {"at": "N"}], "field": "/lo", "check": "equals", "expected": 1,
     "tolerance": 1e-9, "provenance": "published"},
    {"description": "the middle-band formula twists the band around y = 1/3", "operation": "twist",
     "arguments": {}, "field": "/twist_holds", "check": "equals", "expected": true,
     "provenance": "closed-form"},
    {"description": "its fixed points satisfy 3y - 1 = 0", "operation": "twist",
     "arguments": {}, "field": "/fixed_points/*/1", "check": "all_equal",
     "expected": 0.3333333333333333, "tolerance": 1e-9, "provenance": "closed-form"}
  ]
})json";

const char* const kEx7 = R"json({
  "schema": 1,
  "name": "ex7_linear_shear",
  "description": "cylinder map (x + y, y) with ends S and N collapsed",
  "kind": "SphereShear",
  "lift": {"x": "x + y", "y": "y"},
  "region": [0, 1, 0, 1],
  "claims": [
    {"description": "rotation number at S is 0", "operation": "rotation-set",
     "arguments": {"at": "S"}, "field": "/lo", "check": "equals", "expected": 0,
     "tolerance": 1e-9, "provenance": "closed-form"},
    {"description": "rotation number at N is 1", "operation": "rotation-set",
     "arguments": {"at": "N"}, "field": "/hi", "check": "equals", "expected": 1,
     "tolerance": 1e-9, "provenance": "closed-form"},
    {"description": "rotation numbers at S and N sum to 1", "operation": "rotation-set",
     "arguments": [{"at": "S"}, {"at": "N"}], "field": "/lo", "check": "equals", "expected": 1,
     "tolerance": 1e-9, "provenance": "published"},
    {"description": "blow-up rotation number at N is 1", "operation": "blowup-rotation",
     "arguments": {"at": "N"}, "field": "/rho", "check": "equals", "expected": 1,
     "tolerance": 1e-6, "provenance": "closed-form"}
  ]
})json";

const char* const kAppA = R"json({
  "schema": 1,
  "name": "appA_quadratic",
  "description": "isotopy generated by t (x^2 + y^2)",
  "kind": "GenFunc",
  "g": "x^2 + y^2",
  "twist_bound": 0.5,
  "region": [-1, 1, -1, 1],
  "claims": [
    {"description": "det J = 1 at t = 1", "operation": "jacobian",
     "arguments": {"at": [0.3, -0.2], "t": 1}, "field": "/det", "check": "equals",
     "expected": 1, "tolerance": 1e-9, "provenance": "published"},
    {"description": "det J = 1 at t = 1/2", "operation": "jacobian",
     "arguments": {"at": [-0.4, 0.7], "t": 0.5}, "field": "/det", "check": "equals",
     "expected": 1, "tolerance": 1e-9, "provenance": "published"},
    {"description": "the only critical point is a minimum at 0", "operation": "critical-points",
     "arguments": {}, "field": "/points/*/location", "check": "equals",
     "expected": [[0, 0]], "tolerance": 1e-12, "provenance": "closed-form"},
    {"description": "i(f, 0) = 1", "operation": "lefschetz",
     "arguments": {"at": [0, 0], "radius": 0.1}, "field": "/index", "check": "equals",
     "expected": 1, "provenance": "closed-form"},
    {"description": "i(I, 0) = 0", "operation": "isotopy-index",
     "arguments": {"at": [0, 0], "radius": 0.1}, "field": "/index", "check": "equals",
     "expected": 0, "provenance": "closed-form"},
    {"description": "0 is a source of the gradient foliation", "operation": "foliation-index",
     "arguments": {"at": [0, 0], "radius": 0.1}, "field": "/class", "check": "equals",
     "expected": "Source", "provenance": "closed-form"},
    {"description": "i(F) = i(I) + 1", "operation": "index-relation",
     "arguments": {"at": [0, 0], "radius": 0.1}, "field": "/foliation_relation",
     "check": "equals", "expected": true, "provenance": "published"},
    {"description": "two-phase trajectories cross the gradient foliation positively",
     "operation": "transversality",
     "arguments": {"points": [[0.3, 0.1], [-0.5, 0.2], [0.1, -0.6], [-0.3, -0.3]]},
     "field": "/verdict", "check": "equals", "expected": "PositivelyTransverse", "provenance": "published"},
    {"description": "blow-up rotation number along I lies in [-1, 1]", "operation": "blowup-rotation",
     "arguments": {"at": [0, 0]}, "field": "/rho", "check": "within", "expected": [-1, 1],
     "provenance": "published"},
    {"description": "blow-up rotation number along I is -1/2", "operation": "blowup-rotation",
     "arguments": {"at": [0, 0]}, "field": "/rho", "check": "equals", "expected": -0.5,
     "tolerance": 1e-6, "provenance": "closed-form"},
    {"description": "the two-phase isotopy gives the same blow-up rotation number", "operation": "blowup-rotation",
     "arguments": {"at": [0, 0], "isotopy": "alternate"}, "field": "/rho", "check": "equals",
     "expected": -0.5, "tolerance": 1e-6, "provenance": "published"}
  ]
})json";

const std::map<std::string, const char*>& catalog() {
  static const std::map<std::string, const char*> c = {
      {"ex1_homothety", kEx1},       {"ex2_piecewise_flow", kEx2}, {"ex3_annulus_escape", kEx3},
      {"ex4_sphere_3shear", kEx4},   {"ex5_sin2_genfunc", kEx5},   {"ex6_threeband_shear", kEx6},
      {"ex7_linear_shear", kEx7},    {"appA_quadratic", kAppA}};
  return c;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "ex1_homothety",     "ex2_piecewise_flow", "ex3_annulus_escape", "ex4_sphere_3shear",
      "ex5_sin2_genfunc",  "ex6_threeband_shear", "ex7_linear_shear",  "appA_quadratic"};
  return names;
}

Scenario load_fixture(const std::string& name) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) {
    throw UnknownFixture("unknown fixture '" + name + "'", {{"name", name}});
  }
  return parse_scenario(it->second);
}

FixtureReport run_fixture_claims(const Scenario& s) {
  FixtureReport r;
  r.name = s.name;
  for (const Claim& c : s.claims) {
    r.results.push_back(run_claim(s, c));
    r.all_pass = r.all_pass && r.results.back().pass;
  }
  return r;
}

Json fixture_report_json(const FixtureReport& r) {
  Json j;
  j["fixture"] = r.name;
  j["all_pass"] = r.all_pass;
  Json claims = Json::array();
  for (const ClaimResult& c : r.results) {
    Json e = claim_to_json(*c.claim);
    e["computed"] = c.computed;
    e["pass"] = c.pass;
    if (!c.error.empty()) e["error"] = c.error;
    claims.push_back(std::move(e));
  }
  j["claims"] = claims;
  return j;
}

}  // namespace torsionlab
