#pragma once

#include <stdexcept>
#include <string>

namespace airyids {

// Exit codes follow the CLI contract: 2 config, 3 precondition, 4 integrity, 5 numeric.
class Error : public std::runtime_error {
public:
    Error(const std::string& what, int code) : std::runtime_error(what), code_(code) {}
    int exit_code() const noexcept { return code_; }
    virtual const char* kind() const noexcept { return "error"; }

private:
    int code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what, 2) {}
    const char* kind() const noexcept override { return "config"; }
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what, 3) {}
    const char* kind() const noexcept override { return "precondition"; }
};

class IntegrityError : public Error {
public:
    IntegrityError(const std::string& what, std::string trace = {})
        : Error(what, 4), trace_(std::move(trace)) {}
    const char* kind() const noexcept override { return "integrity"; }
    const std::string& trace() const noexcept { return trace_; }

private:
    std::string trace_;
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what, 5) {}
    const char* kind() const noexcept override { return "numeric"; }
};

// Raised when an argument would overflow the working type.
class RangeError : public NumericError {
public:
    using NumericError::NumericError;
    const char* kind() const noexcept override { return "range"; }
};

// Raised by phi_eval when asked for the tan-form bracket at a pole of tan((2N+1)phi).
class PartitionRequired : public NumericError {
public:
    using NumericError::NumericError;
    const char* kind() const noexcept override { return "partition_required"; }
};

} // namespace airyids
