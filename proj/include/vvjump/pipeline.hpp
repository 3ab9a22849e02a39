#pragma once

#include <stdexcept>
#include <string>

#include "vvjump/config.hpp"

namespace vvjump {

// Bad input from the operator (missing files, malformed data, unusable
// arguments); maps to exit code 1, everything else unexpected maps to 2.
class UserError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void cmd_simulate(const RunConfig& config);
void cmd_estimate(const RunConfig& config);
void cmd_test_jumps(const RunConfig& config);
void cmd_diagnose(const RunConfig& config);
void cmd_pvalue_study(const RunConfig& config);

// Dispatches one subcommand, translating failures into exit codes 0/1/2 and
// a machine-readable error record on stderr.
int run_command(const std::string& command, const RunConfig& config);

} // namespace vvjump
