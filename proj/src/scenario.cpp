#include "torsionlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "torsionlab/builtins.hpp"
#include "torsionlab/errors.hpp"

namespace torsionlab {

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::GenFunc: return "GenFunc";
    case ScenarioKind::ExplicitIsotopy: return "ExplicitIsotopy";
    case ScenarioKind::AnnulusMap: return "AnnulusMap";
    case ScenarioKind::SphereShear: return "SphereShear";
    case ScenarioKind::PiecewiseFlow: return "PiecewiseFlow";
  }
  return "?";
}

// ---------------------------------------------------------------- charts

Vec2 to_chart(End e, Vec2 cyl) {
  const double rho = e == End::S ? cyl.y : 1.0 - cyl.y;
  const double a = (e == End::S ? -kTwoPi : kTwoPi) * cyl.x;
  return rho * Vec2{std::cos(a), std::sin(a)};
}

Vec2 from_chart(End e, Vec2 w) {
  const double rho = norm(w);
  const double turns = std::atan2(w.y, w.x) / kTwoPi;
  return e == End::S ? Vec2{-turns, rho} : Vec2{turns, 1.0 - rho};
}

PlanarIsotopy chart_isotopy(const PlanarIsotopy& cyl, End e) {
  auto f = cyl.eval;
  return {[f, e](double t, Vec2 w) {
            if (w.x == 0.0 && w.y == 0.0) return w;
            return to_chart(e, f(t, from_chart(e, w)));
          },
          Vec2{0.0, 0.0}, std::string(e == End::S ? "S" : "N") + " chart of " + cyl.provenance};
}

Foliation chart_foliation(const Foliation& cyl, End e) {
  auto dir = cyl.direction;
  return {[dir, e](Vec2 w) {
            const Vec2 z = from_chart(e, w);
            const Vec2 d = dir(z);
            const double rho = norm(w);
            const double a = (e == End::S ? -kTwoPi : kTwoPi) * z.x;
            const Vec2 er{std::cos(a), std::sin(a)}, et{-std::sin(a), std::cos(a)};
            const double radial = e == End::S ? d.y : -d.y;
            const double angular = (e == End::S ? -kTwoPi : kTwoPi) * rho * d.x;
            return radial * er + angular * et;
          },
          cyl.singular_tol, std::string(e == End::S ? "S" : "N") + " chart of " + cyl.description};
}

PlanarIsotopy annulus_plane_isotopy(const PlanarMap& lift) {
  return {[lift](double t, Vec2 p) {
            if (p.x == 0.0 && p.y == 0.0) return p;
            const CoverPoint c = cover_lift(p);
            const Vec2 z{c.theta, c.y};
            const Vec2 w = z + t * (lift(z) - z);
            return cover_project({w.x, w.y});
          },
          Vec2{0.0, 0.0}, "plane model of an annulus lift"};
}

// ---------------------------------------------------------------- parsing

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what, {{"path", path}});
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) schema_fail(path + "/" + it.key(), "unknown key");
  }
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

std::string string_at(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

Expr expr_at(const Json& j, const std::string& path, bool allow_t) {
  const std::string text = string_at(j, path);
  try {
    return parse_expr(text, ParseOptions{allow_t});
  } catch (const Error& e) {
    throw SchemaError(path + ": " + e.what(), {{"path", path}, {"error", e.name()}, {"detail", e.payload()}});
  }
}

std::pair<Expr, Expr> pair_at(const Json& j, const std::string& path, bool allow_t) {
  allow_keys(j, path, {"x", "y"});
  if (!j.contains("x") || !j.contains("y")) schema_fail(path, "needs both x and y");
  return {expr_at(j["x"], path + "/x", allow_t), expr_at(j["y"], path + "/y", allow_t)};
}

PlanarMap map_of(const std::pair<Expr, Expr>& p) {
  auto [fx, fy] = p;
  return [fx, fy](Vec2 z) { return Vec2{eval_value(fx, z.x, z.y), eval_value(fy, z.x, z.y)}; };
}

Rect rect_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) schema_fail(path, "expected [xmin, xmax, ymin, ymax]");
  Rect r{number_at(j[0], path + "/0"), number_at(j[1], path + "/1"), number_at(j[2], path + "/2"),
         number_at(j[3], path + "/3")};
  if (!(r.xmin < r.xmax && r.ymin < r.ymax)) schema_fail(path, "empty rectangle");
  return r;
}

const std::set<std::string>& argument_names() {
  static const std::set<std::string> names = {
      "at",     "radius", "samples", "with",  "isotopy",   "j_turns", "other",     "other_j_turns",
      "z0",     "z1",     "t_samples", "r0",  "levels",    "n_max",   "threshold", "seeds",
      "grid",   "region", "t",       "points", "steps",    "band_center", "half_width",
      "classify_radius"};
  return names;
}

void check_args(const Json& args, const std::string& path) {
  if (!args.is_object()) schema_fail(path, "arguments must be an object");
  for (auto it = args.begin(); it != args.end(); ++it) {
    if (!argument_names().count(it.key())) schema_fail(path + "/" + it.key(), "unknown argument");
  }
}

Claim claim_at(const Json& j, const std::string& path) {
  allow_keys(j, path, {"description", "operation", "arguments", "field", "check", "expected",
                       "tolerance", "provenance"});
  for (const char* k : {"description", "operation", "field", "check", "expected", "provenance"}) {
    if (!j.contains(k)) schema_fail(path, std::string("missing ") + k);
  }
  Claim c;
  c.description = string_at(j["description"], path + "/description");
  c.operation = string_at(j["operation"], path + "/operation");
  const auto& ops = operation_names();
  if (std::find(ops.begin(), ops.end(), c.operation) == ops.end()) {
    schema_fail(path + "/operation", "unknown operation '" + c.operation + "'");
  }
  const Json args = j.value("arguments", Json::object());
  if (args.is_array()) {
    if (args.empty()) schema_fail(path + "/arguments", "empty argument list");
    for (std::size_t i = 0; i < args.size(); ++i) {
      check_args(args[i], path + "/arguments/" + std::to_string(i));
      c.calls.push_back(args[i]);
    }
  } else {
    check_args(args, path + "/arguments");
    c.calls.push_back(args);
  }
  c.field = string_at(j["field"], path + "/field");
  c.check = string_at(j["check"], path + "/check");
  static const std::set<std::string> checks = {"equals", "all_equal", "contains_points",
                                               "abs_at_least", "within"};
  if (!checks.count(c.check)) schema_fail(path + "/check", "unknown check '" + c.check + "'");
  c.expected = j["expected"];
  c.tolerance = j.contains("tolerance") ? number_at(j["tolerance"], path + "/tolerance") : 0.0;
  c.provenance = string_at(j["provenance"], path + "/provenance");
  static const std::set<std::string> tags = {"published", "closed-form", "definition"};
  if (!tags.count(c.provenance)) schema_fail(path + "/provenance", "unknown provenance tag");
  return c;
}

ScenarioKind kind_at(const Json& j, const std::string& path) {
  const std::string k = string_at(j, path);
  if (k == "GenFunc") return ScenarioKind::GenFunc;
  if (k == "ExplicitIsotopy") return ScenarioKind::ExplicitIsotopy;
  if (k == "AnnulusMap") return ScenarioKind::AnnulusMap;
  if (k == "SphereShear") return ScenarioKind::SphereShear;
  if (k == "PiecewiseFlow") return ScenarioKind::PiecewiseFlow;
  schema_fail(path, "unknown kind '" + k + "'");
}

// Linear interpolation in cylinder coordinates.
PlanarIsotopy interpolated_isotopy(const PlanarMap& lift, std::string provenance) {
  return {[lift](double t, Vec2 z) { return z + t * (lift(z) - z); }, std::nullopt,
          std::move(provenance)};
}

}  // namespace

Scenario build_scenario(const Json& doc) {
  allow_keys(doc, "", {"schema", "name", "description", "kind", "g", "builtin", "twist_bound",
                       "region", "isotopy", "lift", "foliations", "cylinder", "twist", "presets",
                       "claims"});
  if (!doc.contains("schema")) schema_fail("/schema", "missing");
  if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != 1) {
    schema_fail("/schema", "unsupported schema version (expected 1)");
  }
  if (!doc.contains("name")) schema_fail("/name", "missing");
  if (!doc.contains("kind")) schema_fail("/kind", "missing");
  if (doc.contains("description")) string_at(doc["description"], "/description");

  Scenario s;
  s.document = doc;
  s.name = string_at(doc["name"], "/name");
  s.kind = kind_at(doc["kind"], "/kind");
  if (doc.contains("region")) s.region = rect_at(doc["region"], "/region");
  if (doc.contains("cylinder")) {
    if (!doc["cylinder"].is_boolean()) schema_fail("/cylinder", "expected a boolean");
    s.cylinder = doc["cylinder"].get<bool>();
  }
  const std::string builtin = doc.contains("builtin") ? string_at(doc["builtin"], "/builtin") : "";

  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (doc.contains(k)) {
        schema_fail(std::string("/") + k, std::string("not used by kind ") + to_string(s.kind));
      }
    }
  };

  switch (s.kind) {
    case ScenarioKind::GenFunc: {
      forbid({"isotopy", "lift"});
      ScalarField g = ScalarField::from_text("0");
      if (doc.contains("g") == !builtin.empty()) schema_fail("/g", "give exactly one of g and builtin");
      if (!builtin.empty()) {
        if (builtin != "sin2_generating_function") schema_fail("/builtin", "unknown builtin '" + builtin + "'");
        g = builtin::sin2_generating_function();
      } else {
        g = ScalarField::from_expr(expr_at(doc["g"], "/g", false));
      }
      const double c = doc.contains("twist_bound") ? number_at(doc["twist_bound"], "/twist_bound") : 0.5;
      s.gen = make_gen_isotopy(std::move(g), c, s.region);
      s.isotopy = natural_isotopy(*s.gen);
      s.foliations.emplace_back("grad", gradient_foliation(s.gen->g));
      break;
    }
    case ScenarioKind::ExplicitIsotopy: {
      forbid({"g", "builtin", "lift", "twist_bound"});
      if (!doc.contains("isotopy")) schema_fail("/isotopy", "missing");
      auto [fx, fy] = pair_at(doc["isotopy"], "/isotopy", true);
      s.isotopy = expression_isotopy(fx, fy);
      check_identity_at_zero(s.isotopy, {0.5 * (s.region.xmin + s.region.xmax),
                                         0.5 * (s.region.ymin + s.region.ymax)});
      break;
    }
    case ScenarioKind::AnnulusMap: {
      forbid({"g", "builtin", "isotopy", "twist_bound", "foliations"});
      if (!doc.contains("lift")) schema_fail("/lift", "missing");
      s.lift = map_of(pair_at(doc["lift"], "/lift", false));
      s.isotopy = annulus_plane_isotopy(*s.lift);
      break;
    }
    case ScenarioKind::SphereShear: {
      forbid({"g", "builtin", "isotopy", "twist_bound"});
      if (!doc.contains("lift")) schema_fail("/lift", "missing");
      s.cylinder = true;
      s.lift = map_of(pair_at(doc["lift"], "/lift", false));
      s.isotopy = interpolated_isotopy(*s.lift, "straight-line isotopy of the cylinder lift");
      break;
    }
    case ScenarioKind::PiecewiseFlow: {
      forbid({"g", "isotopy", "lift", "twist_bound"});
      if (builtin != "quadrant_flow") schema_fail("/builtin", "PiecewiseFlow needs builtin quadrant_flow");
      s.isotopy = {builtin::quadrant_flow, Vec2{0.0, 0.0}, "quadrant flow"};
      s.foliations.emplace_back("F1", Foliation{builtin::quadrant_transverse, 1e-10, "xi"});
      break;
    }
  }
  if (s.kind != ScenarioKind::GenFunc && s.kind != ScenarioKind::PiecewiseFlow && !builtin.empty()) {
    schema_fail("/builtin", "not used by this kind");
  }

  if (doc.contains("foliations")) {
    const Json& fj = doc["foliations"];
    if (!fj.is_object()) schema_fail("/foliations", "expected an object");
    for (auto it = fj.begin(); it != fj.end(); ++it) {
      const std::string path = "/foliations/" + it.key();
      auto [fx, fy] = pair_at(it.value(), path, false);
      Foliation f = expression_foliation(fx, fy);
      auto existing = std::find_if(s.foliations.begin(), s.foliations.end(),
                                   [&](const auto& p) { return p.first == it.key(); });
      if (existing != s.foliations.end()) schema_fail(path, "duplicate foliation name");
      s.foliations.emplace_back(it.key(), std::move(f));
    }
  }

  if (doc.contains("twist")) {
    const Json& tj = doc["twist"];
    allow_keys(tj, "/twist", {"lift", "center", "half_width"});
    TwistSetup t;
    if (tj.contains("lift")) {
      t.lift = map_of(pair_at(tj["lift"], "/twist/lift", false));
    } else if (s.lift) {
      t.lift = *s.lift;
    } else {
      schema_fail("/twist/lift", "no lift to check");
    }
    if (!tj.contains("center") || !tj.contains("half_width")) schema_fail("/twist", "needs center and half_width");
    t.y_center = number_at(tj["center"], "/twist/center");
    t.half_width = number_at(tj["half_width"], "/twist/half_width");
    s.twist = std::move(t);
  }

  if (doc.contains("presets")) {
    const Json& pj = doc["presets"];
    if (!pj.is_object()) schema_fail("/presets", "expected an object");
    for (auto it = pj.begin(); it != pj.end(); ++it) {
      const auto& ops = operation_names();
      if (std::find(ops.begin(), ops.end(), it.key()) == ops.end()) {
        schema_fail("/presets/" + it.key(), "unknown operation");
      }
      check_args(it.value(), "/presets/" + it.key());
    }
    s.presets = pj;
  }

  if (doc.contains("claims")) {
    const Json& cj = doc["claims"];
    if (!cj.is_array()) schema_fail("/claims", "expected an array");
    for (std::size_t i = 0; i < cj.size(); ++i) {
      s.claims.push_back(claim_at(cj[i], "/claims/" + std::to_string(i)));
    }
  }
  return s;
}

Scenario parse_scenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string detail = e.what();
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": malformed scenario (" + detail + ")",
                      {{"line", line}, {"column", col}});
  }
  return build_scenario(doc);
}

// ---------------------------------------------------------------- operations

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = {
      "lefschetz",    "isotopy-index", "foliation-index", "linking",
      "rotation-set", "blowup-rotation", "torsion-low",   "twist",
      "critical-points", "transversality", "jacobian",    "compare",
      "index-relation"};
  return names;
}

namespace {

class Args {
 public:
  explicit Args(Json j) : j_(std::move(j)) {}

  bool has(const char* k) const { return j_.contains(k); }
  const Json& raw(const char* k) const { return j_.at(k); }

  double num(const char* k, std::optional<double> fallback = std::nullopt) const {
    if (!has(k)) {
      if (!fallback) schema_fail(std::string("argument ") + k, "required");
      return *fallback;
    }
    return number_at(j_.at(k), std::string("argument ") + k);
  }
  int integer(const char* k, std::optional<int> fallback = std::nullopt) const {
    if (!has(k)) {
      if (!fallback) schema_fail(std::string("argument ") + k, "required");
      return *fallback;
    }
    if (!j_.at(k).is_number_integer()) schema_fail(std::string("argument ") + k, "expected an integer");
    return j_.at(k).get<int>();
  }
  std::string str(const char* k, const std::string& fallback) const {
    return has(k) ? string_at(j_.at(k), std::string("argument ") + k) : fallback;
  }
  Vec2 point(const char* k) const {
    if (!has(k)) schema_fail(std::string("argument ") + k, "required");
    return point_of(j_.at(k), std::string("argument ") + k);
  }
  static Vec2 point_of(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) schema_fail(path, "expected [x, y]");
    return {number_at(v[0], path + "/0"), number_at(v[1], path + "/1")};
  }

 private:
  Json j_;
};

Json pt(Vec2 z) { return Json::array({z.x, z.y}); }

struct Frame {
  PlanarIsotopy iso;
  Vec2 center;
  std::optional<End> end;
  bool star = false;
  std::string label;
};

const Foliation& pick_foliation(const Scenario& s, const Args& a) {
  if (s.foliations.empty()) {
    throw InvalidArgument("scenario defines no foliation", {{"scenario", s.name}});
  }
  if (!a.has("with")) return s.foliations.front().second;
  const std::string name = a.str("with", "");
  for (const auto& [n, f] : s.foliations) {
    if (n == name) return f;
  }
  throw InvalidArgument("unknown foliation '" + name + "'", {{"with", name}});
}

PlanarIsotopy variant(const Scenario& s, const std::string& which) {
  if (which == "natural") return s.isotopy;
  if (which == "alternate") {
    if (!s.gen) throw InvalidArgument("alternate isotopy needs a generating function", {{"isotopy", which}});
    return alternate_isotopy(*s.gen);
  }
  throw InvalidArgument("isotopy must be natural or alternate", {{"isotopy", which}});
}

Frame frame(const Scenario& s, const Args& a, const char* variant_key = "isotopy",
            const char* turns_key = "j_turns") {
  Frame f;
  PlanarIsotopy base = variant(s, a.str(variant_key, "natural"));
  const Json& at = a.has("at") ? a.raw("at") : Json();
  if (at.is_string()) {
    const std::string name = at.get<std::string>();
    if (name == "S" || name == "N") {
      if (!s.cylinder) throw InvalidArgument("S and N need a cylinder scenario", {{"at", name}});
      f.end = name == "S" ? End::S : End::N;
      f.iso = chart_isotopy(base, *f.end);
      f.center = {0.0, 0.0};
    } else if (name == "star") {
      if (s.kind != ScenarioKind::AnnulusMap) throw InvalidArgument("star needs an AnnulusMap scenario", {{"at", name}});
      f.star = true;
      f.iso = base;
      f.center = {0.0, 0.0};
    } else {
      throw InvalidArgument("unknown center '" + name + "'", {{"at", name}});
    }
    f.label = name;
  } else {
    f.center = a.point("at");
    f.iso = base;
    f.label = "point";
  }
  const int turns = a.integer(turns_key, 0);
  if (turns != 0) f.iso = compose_rotation(f.iso, f.center, turns);
  return f;
}

Foliation framed_foliation(const Scenario& s, const Args& a, const Frame& f) {
  const Foliation& base = pick_foliation(s, a);
  return f.end ? chart_foliation(base, *f.end) : base;
}

MatrixPath derivative_path(const Scenario& s, const Args& a, const Frame& f) {
  const std::string which = a.str("isotopy", "natural");
  if (s.gen && !f.end && a.integer("j_turns", 0) == 0) {
    const GenIsotopy gen = *s.gen;
    const Vec2 z = f.center;
    if (which == "alternate") return [gen, z](double t) { return gf_alt_jacobian(gen, t, z); };
    return [gen, z](double t) { return gf_jacobian(gen, t, z); };
  }
  return jacobian_path(f.iso, f.center);
}

Json base_echo(const Frame& f) {
  Json j;
  j["center"] = f.label == "point" ? pt(f.center) : Json(f.label);
  return j;
}

Json op_rotation_set(const Scenario& s, const Args& a) {
  const Frame f = frame(s, a);
  const double r0 = a.num("r0", f.end ? std::optional<double>(1e-10) : std::nullopt);
  const RotationSetEstimate e = local_rotation_set_estimate(
      f.iso, f.center, r0, a.integer("levels", 3), a.integer("n_max", 16), a.num("threshold", 10.0),
      a.integer("seeds", 32));
  Json j = base_echo(f);
  double min_abs = INFINITY, max_abs = 0.0;
  Json samples = Json::array();
  for (const auto& smp : e.samples) {
    min_abs = std::min(min_abs, std::abs(smp.rho));
    max_abs = std::max(max_abs, std::abs(smp.rho));
    samples.push_back({{"seed", smp.seed}, {"n", smp.n}, {"rho", smp.rho}, {"start", pt(smp.start)}});
  }
  j["lo"] = e.lo;
  j["hi"] = e.hi;
  j["lo_neg_infinite"] = e.lo_neg_infinite;
  j["hi_pos_infinite"] = e.hi_pos_infinite;
  j["U"] = e.u_radius;
  j["V"] = e.v_radius;
  j["level"] = e.level;
  j["n_min_used"] = e.n_min_used;
  j["sample_count"] = e.samples.size();
  j["total_samples"] = e.total_samples;
  j["min_abs_rho"] = min_abs;
  j["max_abs_rho"] = max_abs;
  j["samples"] = samples;
  return j;
}

Json transversality_json(const TransversalityReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["min_det"] = r.min_det;
  j["samples_used"] = r.samples_used;
  if (r.first_violation) {
    j["first_violation"] = {{"t", r.first_violation->first}, {"point", pt(r.first_violation->second)}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

Json op_transversality(const Scenario& s, const Args& a) {
  const PlanarIsotopy iso = variant(s, a.str("isotopy", s.gen ? "alternate" : "natural"));
  const Foliation& fol = pick_foliation(s, a);
  std::vector<Vec2> pts;
  if (a.has("points")) {
    const Json& p = a.raw("points");
    if (!p.is_array() || p.empty()) schema_fail("argument points", "expected a non-empty list of points");
    for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(Args::point_of(p[i], "argument points/" + std::to_string(i)));
  } else {
    pts.push_back(a.point("at"));
  }
  const int steps = a.integer("steps", 64);
  TransversalityReport total;
  total.verdict = TransverseVerdict::PositivelyTransverse;
  Json per = Json::array();
  for (const Vec2& z : pts) {
    const ParamPath path = sample_path([&](double t) { return iso(t, z); }, 0.0, 1.0, steps);
    const TransversalityReport r = transversality_report(path, fol);
    per.push_back({{"start", pt(z)}, {"verdict", to_string(r.verdict)}, {"min_det", r.min_det}});
    total.min_det = std::min(total.min_det, r.min_det);
    total.samples_used += r.samples_used;
    if (!total.first_violation && r.first_violation) total.first_violation = r.first_violation;
    if (r.verdict == TransverseVerdict::Negative ||
        (r.verdict == TransverseVerdict::Tangent && total.verdict == TransverseVerdict::PositivelyTransverse)) {
      total.verdict = r.verdict;
    }
  }
  Json j = transversality_json(total);
  j["paths"] = per;
  return j;
}

Json op_critical_points(const Scenario& s, const Args& a) {
  if (!s.gen) throw InvalidArgument("critical-points needs a generating function", {{"scenario", s.name}});
  const Rect region = a.has("region") ? rect_at(a.raw("region"), "argument region") : s.region;
  const double cr = a.num("classify_radius", 0.01);
  const auto cps = find_critical_points(s.gen->g, region, a.integer("grid", 64));
  const Foliation grad = gradient_foliation(s.gen->g);
  Json list = Json::array();
  for (const auto& cp : cps) {
    std::string cls = "Unknown";
    Json index = nullptr;
    try {
      const SingularityReport r = classify_singularity(grad, cp.location, cr, 256);
      cls = to_string(r.cls);
      index = r.foliation_index;
    } catch (const Error&) {
    }
    list.push_back({{"location", pt(cp.location)},
                    {"gradient_residual", cp.gradient_residual},
                    {"hessian", {cp.hessian.a, cp.hessian.b, cp.hessian.c, cp.hessian.d}},
                    {"morse_type", to_string(cp.morse_type)},
                    {"foliation_class", cls},
                    {"foliation_index", index}});
  }
  Json j;
  j["region"] = {region.xmin, region.xmax, region.ymin, region.ymax};
  j["count"] = cps.size();
  j["points"] = list;
  return j;
}

Json op_twist(const Scenario& s, const Args& a) {
  AnnulusLiftMap m;
  if (s.twist) {
    m.lift = s.twist->lift;
    m.y_center = s.twist->y_center;
    m.a = s.twist->half_width;
  } else if (s.lift) {
    m.lift = *s.lift;
    m.y_center = s.cylinder ? 0.5 : 0.0;
    m.a = s.cylinder ? 0.5 : 1.0;
  } else {
    throw InvalidArgument("twist needs a lift", {{"scenario", s.name}});
  }
  m.y_center = a.num("band_center", m.y_center);
  m.a = a.num("half_width", m.a);
  m.b = m.a;
  const TwistReport r = twist_check_and_search(m, a.integer("grid", 32));
  Json fps = Json::array();
  for (const Vec2& z : r.fixed_points) fps.push_back(pt(z));
  Json j;
  j["band"] = {m.y_center - m.a, m.y_center + m.a};
  j["twist_holds"] = r.twist_holds;
  j["upper"] = {r.upper_min, r.upper_max};
  j["lower"] = {r.lower_min, r.lower_max};
  j["worst_product"] = r.worst_product;
  j["fixed_point_count"] = r.fixed_points.size();
  j["fixed_points"] = fps;
  return j;
}

}  // namespace

Json run_operation(const Scenario& s, const std::string& op, const Json& args_in) {
  check_args(args_in, "arguments");
  Json merged = s.presets.contains(op) ? s.presets[op] : Json::object();
  for (auto it = args_in.begin(); it != args_in.end(); ++it) merged[it.key()] = it.value();
  const Args a(merged);

  if (op == "lefschetz") {
    const Frame f = frame(s, a);
    Json j = base_echo(f);
    j["index"] = lefschetz_index(f.iso.time_one(), f.center, a.num("radius"), a.integer("samples", 256));
    return j;
  }
  if (op == "isotopy-index") {
    const Frame f = frame(s, a);
    Json j = base_echo(f);
    j["index"] = isotopy_index(f.iso, f.center, a.num("radius"), a.integer("samples", 256));
    return j;
  }
  if (op == "foliation-index") {
    const Frame f = frame(s, a);
    const SingularityReport r =
        classify_singularity(framed_foliation(s, a, f), f.center, a.num("radius"), a.integer("samples", 256));
    Json j = base_echo(f);
    j["class"] = to_string(r.cls);
    j["foliation_index"] = r.foliation_index;
    return j;
  }
  if (op == "linking") {
    const Vec2 z0 = a.point("z0"), z1 = a.point("z1");
    PlanarIsotopy iso = variant(s, a.str("isotopy", "natural"));
    const int turns = a.integer("j_turns", 0);
    if (turns != 0) iso = compose_rotation(iso, z0, turns);
    Json j;
    j["z0"] = pt(z0);
    j["z1"] = pt(z1);
    j["linking_number"] = linking_number(iso, z0, z1, a.integer("t_samples", 256));
    return j;
  }
  if (op == "rotation-set") return op_rotation_set(s, a);
  if (op == "blowup-rotation") {
    const Frame f = frame(s, a);
    const MatrixPath dp = derivative_path(s, a, f);
    Json j = base_echo(f);
    j["rho"] = isotopy_blowup_rotation(dp);
    j["class_mod_1"] = linear_blowup_rotation(dp(1.0));
    return j;
  }
  if (op == "torsion-low") {
    const Frame f = frame(s, a);
    const TorsionVerdict v = torsion_low_classify(derivative_path(s, a, f));
    Json j = base_echo(f);
    j["classification"] = to_string(v.classification);
    j["rho"] = v.rho;
    j["degenerate"] = v.degenerate;
    j["case"] = to_string(v.case_tag);
    return j;
  }
  if (op == "twist") return op_twist(s, a);
  if (op == "critical-points") return op_critical_points(s, a);
  if (op == "transversality") return op_transversality(s, a);
  if (op == "jacobian") {
    const Frame f = frame(s, a);
    const double t = a.num("t", 1.0);
    Mat2 m;
    if (s.gen && !f.end && a.integer("j_turns", 0) == 0) {
      m = a.str("isotopy", "natural") == "alternate" ? gf_alt_jacobian(*s.gen, t, f.center)
                                                     : gf_jacobian(*s.gen, t, f.center);
    } else {
      m = jacobian_path(f.iso, f.center)(t);
    }
    Json j = base_echo(f);
    j["t"] = t;
    j["matrix"] = {m.a, m.b, m.c, m.d};
    j["det"] = m.det();
    return j;
  }
  if (op == "compare") {
    const Frame f = frame(s, a);
    const Frame g = frame(s, a, "other", "other_j_turns");
    const IsotopyOrder o =
        compare_isotopies(f.iso, g.iso, f.center, a.num("radius"), a.integer("grid", 16));
    Json j = base_echo(f);
    j["relation"] = to_string(o.relation);
    j["min_gap"] = o.min_gap;
    j["max_gap"] = o.max_gap;
    j["witness"] = o.witness ? Json::array({o.witness->theta, o.witness->y}) : Json();
    return j;
  }
  if (op == "index-relation") {
    const Frame f = frame(s, a);
    std::optional<PlanarIsotopy> transverse;
    if (s.gen && !f.end && a.integer("j_turns", 0) == 0) transverse = alternate_isotopy(*s.gen);
    const IndexRelationReport r = index_relation_check(
        f.iso, framed_foliation(s, a, f), f.center, a.num("radius"), a.integer("samples", 256), transverse);
    Json j = base_echo(f);
    j["lefschetz"] = r.lefschetz;
    j["isotopy"] = r.isotopy;
    j["foliation"] = r.foliation;
    j["foliation_relation"] = r.foliation_relation;
    j["lefschetz_relation"] = r.lefschetz_relation;
    j["lefschetz_vacuous"] = r.lefschetz_vacuous;
    j["transversality"] = to_string(r.transversality);
    j["min_det"] = r.min_det;
    return j;
  }
  throw InvalidArgument("unknown operation '" + op + "'", {{"op", op}});
}

// ---------------------------------------------------------------- claims

namespace {

// Resolves a pointer whose segments may be "*" (map over an array).
Json select(const Json& root, const std::string& pointer) {
  if (pointer.empty() || pointer == "/") return root;
  const std::size_t star = pointer.find("/*");
  if (star == std::string::npos) return root.at(Json::json_pointer(pointer));
  const Json& arr = star == 0 ? root : root.at(Json::json_pointer(pointer.substr(0, star)));
  if (!arr.is_array()) throw InvalidArgument("'*' applied to a non-array", {{"field", pointer}});
  const std::string rest = pointer.substr(star + 2);
  Json out = Json::array();
  for (const Json& item : arr) out.push_back(select(item, rest));
  return out;
}

bool close_enough(const Json& got, const Json& want, double tol) {
  if (want.is_number() && got.is_number()) {
    return std::abs(got.get<double>() - want.get<double>()) <= tol;
  }
  if (want.is_array() && got.is_array()) {
    if (want.size() != got.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (!close_enough(got[i], want[i], tol)) return false;
    }
    return true;
  }
  return got == want;
}

bool evaluate(const Claim& c, const Json& got) {
  if (c.check == "equals") return close_enough(got, c.expected, c.tolerance);
  if (c.check == "all_equal") {
    if (!got.is_array() || got.empty()) return false;
    return std::all_of(got.begin(), got.end(),
                       [&](const Json& v) { return close_enough(v, c.expected, c.tolerance); });
  }
  if (c.check == "contains_points") {
    if (!got.is_array() || !c.expected.is_array()) return false;
    for (const Json& want : c.expected) {
      const bool hit = std::any_of(got.begin(), got.end(), [&](const Json& p) {
        return p.is_array() && p.size() == 2 &&
               std::hypot(p[0].get<double>() - want[0].get<double>(),
                          p[1].get<double>() - want[1].get<double>()) <= c.tolerance;
      });
      if (!hit) return false;
    }
    return true;
  }
  if (c.check == "abs_at_least") {
    auto ok = [&](const Json& v) { return v.is_number() && std::abs(v.get<double>()) >= c.expected.get<double>(); };
    if (got.is_array()) return !got.empty() && std::all_of(got.begin(), got.end(), ok);
    return ok(got);
  }
  if (c.check == "within") {
    const double lo = c.expected[0].get<double>(), hi = c.expected[1].get<double>();
    auto ok = [&](const Json& v) {
      return v.is_number() && v.get<double>() >= lo - c.tolerance && v.get<double>() <= hi + c.tolerance;
    };
    if (got.is_array()) return !got.empty() && std::all_of(got.begin(), got.end(), ok);
    return ok(got);
  }
  return false;
}

}  // namespace

ClaimResult run_claim(const Scenario& s, const Claim& c) {
  ClaimResult r;
  r.claim = &c;
  try {
    if (c.calls.size() == 1) {
      r.computed = select(run_operation(s, c.operation, c.calls.front()), c.field);
    } else {
      double sum = 0.0;
      for (const Json& args : c.calls) {
        const Json v = select(run_operation(s, c.operation, args), c.field);
        if (!v.is_number()) throw InvalidArgument("summed field is not a number", {{"field", c.field}});
        sum += v.get<double>();
      }
      r.computed = sum;
    }
    r.pass = evaluate(c, r.computed);
  } catch (const Error& e) {
    r.error = e.name() + ": " + e.what();
    r.pass = false;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.pass = false;
  }
  return r;
}

Json claim_to_json(const Claim& c) {
  Json j;
  j["description"] = c.description;
  j["operation"] = c.operation;
  if (c.calls.size() == 1) {
    j["arguments"] = c.calls.front();
  } else {
    j["arguments"] = c.calls;
  }
  j["field"] = c.field;
  j["check"] = c.check;
  j["expected"] = c.expected;
  j["tolerance"] = c.tolerance;
  j["provenance"] = c.provenance;
  return j;
}

}  // namespace torsionlab
