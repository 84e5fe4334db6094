#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vbank {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when the error is not tied to a line.
class LoadError : public Error {
public:
    LoadError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A series file parsed cleanly but produced no usable rows.
class EmptySeriesError : public Error {
public:
    using Error::Error;
};

/// A statistics window selected no observations.
class EmptyWindowError : public Error {
public:
    using Error::Error;
};

/// An argument outside the domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Portfolio synthesis could not satisfy its constraints.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// A return ratio whose denominator is zero.
class UndefinedReturnError : public Error {
public:
    using Error::Error;
};

/// Root bracket with more than one sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Bad key=value configuration or command-line value.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vbank
