#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fmdiag {

/// Base class for every domain error raised by the library. The CLI maps
/// these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax or structural error in a model or test-suite file. Line and column
/// are 1-based; column 0 means the whole line, line 0 the whole file.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(format(line, column, message)), line_(line), column_(column), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    static std::string format(std::size_t line, std::size_t column, const std::string& message) {
        if (line == 0) return message;
        std::string out = "line " + std::to_string(line);
        if (column != 0) out += ", column " + std::to_string(column);
        return out + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// A feature model that violates the tree invariants.
class ModelError : public Error {
public:
    using Error::Error;
};

/// A formula references a feature the variable table does not know.
class UnknownFeature : public Error {
public:
    explicit UnknownFeature(const std::string& name)
        : Error("unknown feature '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// A positive test is inconsistent with the background knowledge alone, so
/// no deletion of consideration-set constraints can repair it.
class NoDiagnosisPossible : public Error {
public:
    explicit NoDiagnosisPossible(const std::string& test_label)
        : Error("no diagnosis possible: test " + test_label +
                " is inconsistent with the background knowledge"),
          test_label_(test_label) {}
    const std::string& test_label() const noexcept { return test_label_; }

private:
    std::string test_label_;
};

class InvalidConsiderationSet : public Error {
public:
    using Error::Error;
};

/// Exhaustive enumeration refused because the input is too large.
class TooLarge : public Error {
public:
    using Error::Error;
};

/// The synthesizer could not hit the requested constraint count.
class Infeasible : public Error {
public:
    using Error::Error;
};

/// The synthesizer could not produce enough inconsistency-inducing tests.
class ShareUnreachable : public Error {
public:
    using Error::Error;
};

/// Broken internal invariant (solver returned a bad witness, a diagnosis
/// failed post-hoc validation). Indicates a bug, never bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace fmdiag
