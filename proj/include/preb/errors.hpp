#pragma once

#include <stdexcept>
#include <string>

namespace preb {

// Process exit codes used by the command line front end.
enum class ExitCode : int {
    ok = 0,
    config = 2,
    no_unique_ness = 3,
    numerical = 4,
    validation = 5,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const { return ExitCode::numerical; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::config; }
};

// Cycle map has spectral radius at (or numerically at) one.
class NoUniqueNessError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::no_unique_ness; }
};

class NumericalError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::numerical; }
};

} // namespace preb
