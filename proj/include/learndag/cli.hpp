#ifndef LEARNDAG_CLI_HPP
#define LEARNDAG_CLI_HPP

#include <string>
#include <vector>

namespace learndag::cli {

// Exit codes: 0 success, 2 parse/validation failure, 3 numeric failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;

// Entry point shared by the binary and in-process tests.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace learndag::cli

#endif  // LEARNDAG_CLI_HPP
