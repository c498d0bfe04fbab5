#ifndef WARDROP_ERRORS_HPP
#define WARDROP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wardrop {

/// Input text could not be parsed; `line` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

/// A commodity with positive demand has no path from origin to destination.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wardrop

#endif
