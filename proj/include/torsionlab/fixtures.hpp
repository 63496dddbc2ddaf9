#pragma once

#include <string>
#include <vector>

#include "torsionlab/scenario.hpp"

namespace torsionlab {

const std::vector<std::string>& fixture_names();

/// Throws UnknownFixture.
Scenario load_fixture(const std::string& name);

struct FixtureReport {
  std::string name;
  std::vector<ClaimResult> results;
  bool all_pass = true;
};

/// Runs every claim; failures are recorded, never thrown.
FixtureReport run_fixture_claims(const Scenario& s);

Json fixture_report_json(const FixtureReport& r);

}  // namespace torsionlab
