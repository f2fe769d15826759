#pragma once

#include "fgt/config.hpp"
#include "fgt/quadrature.hpp"

namespace fgt {

// Exit code contract: 0 all checks pass, 1 a checked bound failed,
// 2 truncation too shallow (flags raised), 3 configuration error.
struct CommandOutcome {
    json report;
    int exit_code = 0;
    double wall_seconds = 0.0;  // reported in the text format only
};

CommandOutcome cmd_group_build(const RunConfig& cfg);
CommandOutcome cmd_carleson(const RunConfig& cfg);
CommandOutcome cmd_verify_thm13(const RunConfig& cfg);
CommandOutcome cmd_verify_sec4(const RunConfig& cfg);
CommandOutcome cmd_render(const RunConfig& cfg);
CommandOutcome cmd_denjoy_homogeneity(const RunConfig& cfg);

std::string render_text_report(const CommandOutcome& outcome);

}  // namespace fgt
