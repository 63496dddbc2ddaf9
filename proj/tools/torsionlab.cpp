// torsionlab command-line front end.
//
//   torsionlab fixture <name> --claims | --describe
//   torsionlab analyze (--scenario FILE | --fixture NAME) --op OP [flags]
//   torsionlab export  (--scenario FILE | --fixture NAME) (--leaves N | --orbit X,Y --steps K) --out PATH
//
// Exit codes: 0 success, 1 operation/claim/I-O failure, 2 input error.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "torsionlab/errors.hpp"
#include "torsionlab/fixtures.hpp"
#include "torsionlab/scenario.hpp"

namespace tl = torsionlab;
using tl::Json;

namespace {

constexpr const char* kTool = "torsionlab";
constexpr const char* kVersion = "1.0.0";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json header(const std::string& command) {
  Json j;
  j["tool"] = kTool;
  j["version"] = kVersion;
  j["command"] = command;
  return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v)) {
    throw InputError(what + ": '" + s + "' is not a number");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_number(item, what));
  return out;
}

Json parse_point(const std::string& s, const std::string& what) {
  const auto v = parse_list(s, ',', what);
  if (v.size() != 2) throw InputError(what + ": expected x,y");
  return Json::array({v[0], v[1]});
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Source {
  std::string scenario_path;
  std::string fixture;
};

tl::Scenario load(const Source& src, Json& echo) {
  if (!src.fixture.empty() && !src.scenario_path.empty()) {
    throw InputError("give either --scenario or --fixture, not both");
  }
  if (!src.fixture.empty()) {
    echo["fixture"] = src.fixture;
    return tl::load_fixture(src.fixture);
  }
  if (src.scenario_path.empty()) throw InputError("--scenario or --fixture is required");
  echo["scenario_file"] = src.scenario_path;
  return tl::parse_scenario(read_file(src.scenario_path));
}

// Errors raised while validating input rather than while computing.
bool is_input_error(const tl::Error& e) {
  static const std::vector<std::string> names = {
      "SchemaError", "SyntaxError", "UnknownIdentifier", "UnknownFixture", "InvalidArgument",
      "TwistBoundViolated", "NotIdentityAtZero"};
  return std::find(names.begin(), names.end(), e.name()) != names.end();
}

int report_error(const tl::Error& e, Json out) {
  std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
  if (is_input_error(e)) return 2;
  out["error"] = {{"name", e.name()}, {"message", e.what()}, {"payload", e.payload()}};
  emit(out);
  return 1;
}

std::string csv_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

// ---------------------------------------------------------------- fixture

struct FixtureOpts {
  std::string name;
  bool claims = false;
  bool describe = false;
};

int cmd_fixture(const FixtureOpts& o) {
  Json out = header("fixture");
  out["input"] = {{"fixture", o.name}, {"mode", o.claims ? "claims" : "describe"}};
  const tl::Scenario s = tl::load_fixture(o.name);
  if (o.describe) {
    out["scenario"] = s.document;
    emit(out);
    return 0;
  }
  const tl::FixtureReport r = tl::run_fixture_claims(s);
  out["report"] = tl::fixture_report_json(r);
  emit(out);
  if (!r.all_pass) {
    for (const auto& c : r.results) {
      if (!c.pass) std::cerr << "claim failed: " << c.claim->description << '\n';
    }
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOpts {
  Source src;
  std::string op;
  std::string at, with, isotopy, other, z0, z1, region, points, args_json;
  std::optional<double> radius, r0, threshold, t, band_center, half_width, classify_radius;
  std::optional<int> samples, levels, n_max, seeds, grid, j_turns, other_j_turns, t_samples, steps;
};

Json analyze_args(const AnalyzeOpts& o) {
  Json a = Json::object();
  if (!o.args_json.empty()) {
    try {
      a = Json::parse(o.args_json);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("--args: ") + e.what());
    }
    if (!a.is_object()) throw InputError("--args must be a JSON object");
  }
  if (!o.at.empty()) {
    if (o.at == "S" || o.at == "N" || o.at == "star") {
      a["at"] = o.at;
    } else {
      a["at"] = parse_point(o.at, "--at");
    }
  }
  auto put_num = [&](const char* k, const std::optional<double>& v) {
    if (v) a[k] = *v;
  };
  auto put_int = [&](const char* k, const std::optional<int>& v) {
    if (v) a[k] = *v;
  };
  put_num("radius", o.radius);
  put_num("r0", o.r0);
  put_num("threshold", o.threshold);
  put_num("t", o.t);
  put_num("band_center", o.band_center);
  put_num("half_width", o.half_width);
  put_num("classify_radius", o.classify_radius);
  put_int("samples", o.samples);
  put_int("levels", o.levels);
  put_int("n_max", o.n_max);
  put_int("seeds", o.seeds);
  put_int("grid", o.grid);
  put_int("j_turns", o.j_turns);
  put_int("other_j_turns", o.other_j_turns);
  put_int("t_samples", o.t_samples);
  put_int("steps", o.steps);
  if (!o.with.empty()) a["with"] = o.with;
  if (!o.isotopy.empty()) a["isotopy"] = o.isotopy;
  if (!o.other.empty()) a["other"] = o.other;
  if (!o.z0.empty()) a["z0"] = parse_point(o.z0, "--z0");
  if (!o.z1.empty()) a["z1"] = parse_point(o.z1, "--z1");
  if (!o.region.empty()) {
    const auto r = parse_list(o.region, ',', "--region");
    if (r.size() != 4) throw InputError("--region: expected xmin,xmax,ymin,ymax");
    a["region"] = r;
  }
  if (!o.points.empty()) {
    Json pts = Json::array();
    std::stringstream ss(o.points);
    std::string item;
    while (std::getline(ss, item, ';')) pts.push_back(parse_point(item, "--points"));
    a["points"] = pts;
  }
  return a;
}

int cmd_analyze(const AnalyzeOpts& o) {
  Json out = header("analyze");
  Json input;
  const tl::Scenario s = load(o.src, input);
  const Json args = analyze_args(o);
  input["scenario"] = s.document;
  input["op"] = o.op;
  input["arguments"] = args;
  out["input"] = input;
  try {
    out["result"] = tl::run_operation(s, o.op, args);
  } catch (const tl::Error& e) {
    return report_error(e, out);
  }
  emit(out);
  return 0;
}

// ---------------------------------------------------------------- export

struct ExportOpts {
  Source src;
  std::optional<int> leaves;
  std::string orbit;
  int steps = 20;
  std::string out;
  std::string with;
  double step = 0.005;
  double seed_radius = 0.1;
  std::optional<double> max_length;
};

const tl::Foliation& export_foliation(const tl::Scenario& s, const std::string& with) {
  if (s.foliations.empty()) throw tl::InvalidArgument("scenario defines no foliation", {{"scenario", s.name}});
  if (with.empty()) return s.foliations.front().second;
  for (const auto& [n, f] : s.foliations) {
    if (n == with) return f;
  }
  throw tl::InvalidArgument("unknown foliation '" + with + "'", {{"with", with}});
}

int cmd_export(const ExportOpts& o) {
  Json out = header("export");
  Json input;
  const tl::Scenario s = load(o.src, input);
  if (o.leaves.has_value() == !o.orbit.empty()) throw InputError("give exactly one of --leaves or --orbit");
  input["scenario"] = s.document;
  input["out"] = o.out;

  std::ostringstream csv;
  std::size_t rows = 0;
  Json summary;
  try {
    if (o.leaves) {
      if (*o.leaves < 1) throw InputError("--leaves must be at least 1");
      if (!(o.step > 0.0)) throw InputError("--step must be positive");
      const tl::Foliation& f = export_foliation(s, o.with);
      const tl::Rect& r = s.region;
      const tl::Vec2 c{0.5 * (r.xmin + r.xmax), 0.5 * (r.ymin + r.ymax)};
      const double max_len = o.max_length.value_or(std::hypot(r.xmax - r.xmin, r.ymax - r.ymin));
      input["leaves"] = *o.leaves;
      input["step"] = o.step;
      input["seed_radius"] = o.seed_radius;
      input["max_length"] = max_len;
      if (!o.with.empty()) input["with"] = o.with;
      csv << "leaf_id,s,x,y\n";
      Json stops = Json::array();
      for (int k = 0; k < *o.leaves; ++k) {
        const double a = tl::kTwoPi * k / *o.leaves;
        const tl::Vec2 z0{c.x + o.seed_radius * std::cos(a), c.y + o.seed_radius * std::sin(a)};
        const tl::Leaf leaf = tl::integrate_leaf(f, z0, o.step, max_len, 1e-3, r);
        for (std::size_t i = 0; i < leaf.vertices.size(); ++i) {
          csv << k << ',' << csv_number(leaf.arclength[i]) << ',' << csv_number(leaf.vertices[i].x) << ','
              << csv_number(leaf.vertices[i].y) << '\n';
          ++rows;
        }
        stops.push_back(tl::to_string(leaf.stop));
      }
      summary["leaves"] = *o.leaves;
      summary["stops"] = stops;
    } else {
      if (o.steps < 0) throw InputError("--steps must be non-negative");
      const Json z0 = parse_point(o.orbit, "--orbit");
      input["orbit"] = z0;
      input["steps"] = o.steps;
      const tl::PlanarMap f = s.isotopy.time_one();
      tl::Vec2 z{z0[0].get<double>(), z0[1].get<double>()};
      csv << "iter,x,y\n";
      for (int k = 0; k <= o.steps; ++k) {
        csv << k << ',' << csv_number(z.x) << ',' << csv_number(z.y) << '\n';
        ++rows;
        if (k < o.steps) z = f(z);
      }
      summary["steps"] = o.steps;
    }
  } catch (const tl::Error& e) {
    out["input"] = input;
    return report_error(e, out);
  }
  out["input"] = input;

  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (file) file << csv.str();
  if (!file || !file.flush()) {
    std::cerr << "error: IOError: cannot write '" << o.out << "'\n";
    out["error"] = {{"name", "IOError"}, {"message", "cannot write output file"}, {"payload", {{"path", o.out}}}};
    emit(out);
    return 1;
  }
  summary["rows"] = rows;
  out["result"] = summary;
  emit(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local rotation and index computations for planar isotopies"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  FixtureOpts fo;
  auto* fixture = app.add_subcommand("fixture", "Run or describe a built-in fixture");
  fixture->add_option("name", fo.name, "Fixture name")->required();
  auto* claims_flag = fixture->add_flag("--claims", fo.claims, "Run the fixture's claims");
  auto* describe_flag = fixture->add_flag("--describe", fo.describe, "Print the fixture document");
  claims_flag->excludes(describe_flag);

  AnalyzeOpts ao;
  auto* analyze = app.add_subcommand("analyze", "Run one operation on a scenario");
  analyze->add_option("--scenario", ao.src.scenario_path, "Scenario file (JSON)");
  analyze->add_option("--fixture", ao.src.fixture, "Built-in fixture instead of a file");
  analyze->add_option("--op", ao.op, "Operation name")->required();
  analyze->add_option("--at,--center", ao.at, "Center: x,y or S, N, star");
  analyze->add_option("--radius", ao.radius);
  analyze->add_option("--samples", ao.samples);
  analyze->add_option("--with", ao.with, "Foliation name");
  analyze->add_option("--isotopy", ao.isotopy, "natural or alternate");
  analyze->add_option("--j-turns", ao.j_turns);
  analyze->add_option("--other", ao.other);
  analyze->add_option("--other-j-turns", ao.other_j_turns);
  analyze->add_option("--z0", ao.z0);
  analyze->add_option("--z1", ao.z1);
  analyze->add_option("--t-samples", ao.t_samples);
  analyze->add_option("--r0", ao.r0);
  analyze->add_option("--levels", ao.levels);
  analyze->add_option("--n-max", ao.n_max);
  analyze->add_option("--threshold", ao.threshold);
  analyze->add_option("--seeds", ao.seeds);
  analyze->add_option("--grid", ao.grid);
  analyze->add_option("--region", ao.region, "xmin,xmax,ymin,ymax");
  analyze->add_option("--t", ao.t);
  analyze->add_option("--points", ao.points, "x,y;x,y;...");
  analyze->add_option("--steps", ao.steps);
  analyze->add_option("--band-center", ao.band_center);
  analyze->add_option("--half-width", ao.half_width);
  analyze->add_option("--classify-radius", ao.classify_radius);
  analyze->add_option("--args", ao.args_json, "Extra arguments as a JSON object");

  ExportOpts eo;
  auto* exp = app.add_subcommand("export", "Write leaves or an orbit as CSV");
  exp->add_option("--scenario", eo.src.scenario_path, "Scenario file (JSON)");
  exp->add_option("--fixture", eo.src.fixture, "Built-in fixture instead of a file");
  exp->add_option("--leaves", eo.leaves, "Number of leaves seeded on a circle around the region center");
  exp->add_option("--orbit", eo.orbit, "Orbit start x,y");
  exp->add_option("--steps", eo.steps, "Orbit length");
  exp->add_option("--out", eo.out, "CSV path")->required();
  exp->add_option("--with", eo.with, "Foliation name");
  exp->add_option("--step", eo.step, "Leaf integration step");
  exp->add_option("--seed-radius", eo.seed_radius, "Radius of the seed circle");
  exp->add_option("--max-length", eo.max_length, "Leaf length cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fixture->parsed()) {
      if (!fo.claims && !fo.describe) throw InputError("fixture needs --claims or --describe");
      return cmd_fixture(fo);
    }
    if (analyze->parsed()) return cmd_analyze(ao);
    return cmd_export(eo);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const tl::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return is_input_error(e) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
