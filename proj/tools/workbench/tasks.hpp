#pragma once

#include <string>
#include <vector>

#include "problem.hpp"

namespace wb {

struct RunOptions {
    bool scaled_probes = true;  // --probes extra (default) or frames
};

struct TaskOutcome {
    std::string name;
    std::string status;  // pass, fail or error
    awb::Report report;
    std::string error;
    double elapsed_ms = 0;
};

// Throws DslError (semantic) for unknown commands or unresolved arguments.
void validate_task(const Problem& P, const Task& t);

TaskOutcome run_task(const Problem& P, const Task& t, const RunOptions& opt);

// One line per command: name and argument synopsis.
std::vector<std::string> task_synopses();

}  // namespace wb
