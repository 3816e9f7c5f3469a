#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace folpsi {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments: dimension mismatch, point outside the domain, bad orders.
class InputError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario or expression text. Carries the field and column.
class ParseError : public Error {
public:
    ParseError(std::string field, std::size_t column, const std::string& what)
        : Error(field + ":" + std::to_string(column) + ": " + what),
          field_(std::move(field)), column_(column) {}
    const std::string& field() const { return field_; }
    std::size_t column() const { return column_; }

private:
    std::string field_;
    std::size_t column_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Dense materialization requested above the configured row cap.
class CapExceededError : public Error {
public:
    using Error::Error;
};

/// A frequency request above the grid's Nyquist frequency.
class AliasingError : public Error {
public:
    using Error::Error;
};

/// Raised when a symbol fails a pointwise check; stores the offending (x, xi).
class WitnessError : public Error {
public:
    WitnessError(const std::string& what, std::vector<double> x, std::vector<double> xi)
        : Error(what), x_(std::move(x)), xi_(std::move(xi)) {}
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& xi() const { return xi_; }

private:
    std::vector<double> x_;
    std::vector<double> xi_;
};

class EllipticityError : public WitnessError {
public:
    using WitnessError::WitnessError;
};

class PositivityError : public WitnessError {
public:
    using WitnessError::WitnessError;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

/// A flow trajectory left the box domain.
class EscapeError : public Error {
public:
    EscapeError(const std::string& what, double exit_time)
        : Error(what), exit_time_(exit_time) {}
    double exit_time() const { return exit_time_; }

private:
    double exit_time_;
};

}  // namespace folpsi
