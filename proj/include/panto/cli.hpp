#pragma once

#include <string>
#include <vector>

namespace panto {
namespace cli {

// Exit codes: 0 success, 1 validation error, 2 numerical non-convergence.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace cli
}  // namespace panto
