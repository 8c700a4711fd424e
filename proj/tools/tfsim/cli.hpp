#pragma once

#include <ostream>

namespace tfsim {

// Entry point shared by the executable and the tests. Returns the process
// exit status; failures print one "tfsim: error: ..." line to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tfsim
