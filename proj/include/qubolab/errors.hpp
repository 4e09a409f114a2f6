#ifndef QUBOLAB_ERRORS_HPP
#define QUBOLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qubolab {

/// Malformed instance text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(long long line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    long long line() const { return line_; }

private:
    long long line_;
};

/// Non-finite loss or gradient during training; aborts the run.
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qubolab

#endif
