#ifndef MSMFE_ERRORS_HPP
#define MSMFE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace msmfe {

/// Process exit categories used by the command line tool.
enum class ErrorCategory : int {
    validation = 2,
    solver = 3,
    io = 4,
    verification = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what) : std::runtime_error(what), category_(category) {}
    [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCategory::validation, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::validation, what) {}
};

class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error(ErrorCategory::solver, what) {}
};

/// A local block that must be symmetric positive definite is not.
class NotPositiveDefinite : public SolverError {
public:
    NotPositiveDefinite(const std::string& what, long entity) : SolverError(what), entity_(entity) {}
    /// Mesh vertex (or other entity) that owns the failing block, -1 when unknown.
    [[nodiscard]] long entity() const noexcept { return entity_; }

private:
    long entity_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace msmfe

#endif  // MSMFE_ERRORS_HPP
