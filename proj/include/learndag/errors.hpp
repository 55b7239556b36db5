#ifndef LEARNDAG_ERRORS_HPP
#define LEARNDAG_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace learndag {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: dimensions, configuration values, precondition violations.
class validation_error : public error {
public:
    using error::error;
};

// Malformed input file; line/column are 1-based, 0 when unknown.
class parse_error : public error {
public:
    parse_error(const std::string& msg, int line = 0, int column = 0)
        : error(msg), line(line), column(column) {}
    int line;
    int column;
};

// Edge set admits no topological order; `cycle` names one offending cycle.
class cycle_error : public error {
public:
    cycle_error(const std::string& msg, std::vector<int> cycle)
        : error(msg), cycle(std::move(cycle)) {}
    std::vector<int> cycle;
};

class numeric_error : public error {
public:
    using error::error;
};

// Information matrix is rank-deficient; the affected edge is untestable.
class singular_fit_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

}  // namespace learndag

#endif  // LEARNDAG_ERRORS_HPP
