#pragma once

// Front end shared by the lyness-ecm tool and the tests.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lyness/ecm.hpp"

namespace lyness {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitFactor = 0, kExitNoFactor = 1, kExitUsage = 2, kExitDegenerate = 3 };

struct RunReport {
    std::vector<std::string> invocation;
    std::string version = kVersion;
    EcmConfig config;
    std::string chain;
    EcmOutcome outcome;
    double wall_ms = 0;

    nlohmann::json to_json() const;
    /// Throws std::invalid_argument (or a json exception) on malformed input.
    static RunReport from_json(const nlohmann::json& j);
};

nlohmann::json tally_to_json(const CostTally& t);
CostTally tally_from_json(const nlohmann::json& j);

/// Runs stage1_multi for the config and wraps the result.
RunReport run_factor(const EcmConfig& config, std::vector<std::string> invocation = {});

void print_report(const RunReport& report, std::ostream& out);

/// The worked example with N = 3595474639; returns nonzero on any mismatch.
int cmd_demo(std::ostream& out);

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lyness
