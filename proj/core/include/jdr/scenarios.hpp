#ifndef JDR_SCENARIOS_HPP
#define JDR_SCENARIOS_HPP

#include "jdr/reduce.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jdr {

struct VerifyOptions {
    std::string filter;          // id prefix
    std::uint64_t seed = 20240915;
    Mutations mut;
};

struct ScenarioReport {
    std::string id;
    std::string status; // pass | fail | error
    std::string computed;
    std::string expected;
    double ms = 0.0;
};

struct SuiteResult {
    std::vector<ScenarioReport> reports;
    int pass = 0;
    int fail = 0;
    int exit_code = 0; // 0 all pass, 1 some fail, 2 internal error
};

std::vector<std::string> scenario_ids();
std::string scenario_description(const std::string& id);

// Runs one scenario; throws UnknownScenario for an unregistered id.
ScenarioReport run_scenario(const std::string& id, const VerifyOptions& opt);

// Runs every scenario whose id starts with the filter prefix, sorted by id.
SuiteResult run_suite(const VerifyOptions& opt);

std::string report_text(const SuiteResult& suite);
std::string report_json(const SuiteResult& suite);

} // namespace jdr

#endif
