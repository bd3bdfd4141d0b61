#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvx {

enum class ErrorKind {
    Schema,
    DuplicateClassName,
    UnknownSuper,
    UnknownTarget,
    CyclicInheritance,
    DuplicateFeature,
    DuplicateId,
    UnknownClass,
    AbstractInstantiation,
    UnknownObject,
    UnknownFeature,
    TypeMismatch,
    MultiplicityViolation,
    UnknownOperation,
    CycleDetected,
    MissingArgument,
    UnknownReceiver,
    UnknownContract,
    UnknownFixture,
    UnknownContextObject,
    Io,
    EvalError,
};

const char* to_string(ErrorKind kind);

/// Operational error: bad documents, bad arguments, broken invariant inputs.
/// Violations and verdicts are data, not errors; this type is for failures
/// that abort the requested operation.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/// Syntax error with a position into the source text (1-based line/column).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::string message,
               std::vector<std::string> expected = {})
        : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column),
          message_(std::move(message)),
          expected_(std::move(expected)) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    int line_;
    int column_;
    std::string message_;
    std::vector<std::string> expected_;
};

} // namespace mvx
