#pragma once

#include <string>
#include <vector>

namespace polardyn::cli {

// Runs the command line; returns the process exit status.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args exclude the program name

}  // namespace polardyn::cli
