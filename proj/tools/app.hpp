#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace lambda_pt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailure = 1,
  kExitConfigError = 2,
  kExitExceptionalPoint = 3,
  kExitOverflow = 4,
};

// Entry point shared by main() and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_fig2(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// LAMBDA_PT_THREADS, 0 or unset meaning all hardware threads.
unsigned sweep_thread_count();

}  // namespace lambda_pt::cli
