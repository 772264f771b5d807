#pragma once

#include <stdexcept>
#include <string>

namespace cmom {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised on malformed input documents; carries the 1-based line number.
class ParseError : public Error {
  public:
    ParseError(const std::string& message, int line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit ParseError(const std::string& message) : Error(message), line_(0) {}

    [[nodiscard]] int line() const { return line_; }

  private:
    int line_;
};

/// Raised when an equivalentClass expression uses a construct outside the
/// supported subset (Named / intersectionOf / unionOf / someValuesFrom).
class UnsupportedConstructError : public ParseError {
  public:
    UnsupportedConstructError(const std::string& construct, int line)
        : ParseError("unsupported OWL construct: " + construct, line), construct_(construct) {}

    [[nodiscard]] const std::string& construct() const { return construct_; }

  private:
    std::string construct_;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A file-backed lookup (e.g. embedding store) had no entry for the key.
class LookupError : public Error {
  public:
    using Error::Error;
};

/// Transport-level failure talking to a remote endpoint.
class TransportError : public Error {
  public:
    TransportError(const std::string& message, int status, bool retryable)
        : Error(message), status_(status), retryable_(retryable) {}

    [[nodiscard]] int status() const { return status_; }
    [[nodiscard]] bool retryable() const { return retryable_; }

  private:
    int status_;
    bool retryable_;
};

/// Model output contained no parseable RDF at all.
class InvalidOutputError : public Error {
  public:
    using Error::Error;
};

/// Model output parsed as RDF but carried no equivalentClass axiom.
class MissingAxiomError : public Error {
  public:
    using Error::Error;
};

/// Model output carried an equivalentClass axiom for a different subject.
class WrongSubjectError : public Error {
  public:
    using Error::Error;
};

class EvalError : public Error {
  public:
    using Error::Error;
};

/// A name normalized to zero tokens.
class EmptyNameError : public Error {
  public:
    using Error::Error;
};

} // namespace cmom
