#pragma once

#include <iosfwd>

namespace preb::cli {

// Runs the command line front end; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace preb::cli
