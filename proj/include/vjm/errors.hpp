#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace vjm {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// Invalid model data: bad spring matrix, malformed chain, schema violation.
class ModelError : public Error {
public:
    using Error::Error;
};

/// Requested pose cannot be reached by one of the chains.
class WorkspaceError : public Error {
public:
    WorkspaceError(const std::string& what_arg, std::string chain_name)
        : Error(what_arg), chain_name_(std::move(chain_name)) {}

    const std::string& chain_name() const noexcept { return chain_name_; }

private:
    std::string chain_name_;
};

/// Chains evaluated at coordinates that do not close on a common end pose.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Numerical failure during a solve: loss of positive definiteness under load,
/// singular system where a unique solution is required.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace vjm
