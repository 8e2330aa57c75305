#pragma once

#include <stdexcept>
#include <string>

namespace lsm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class DegenerateSpring : public InvalidInput {
public:
    DegenerateSpring(int spring, const std::string& what)
        : InvalidInput(what), spring_(spring) {}
    [[nodiscard]] int spring() const noexcept { return spring_; }

private:
    int spring_;
};

/// One of the three standing assumptions failed during assembly.
class AssumptionViolation : public Error {
public:
    AssumptionViolation(int assumption, const std::string& what)
        : Error(what), assumption_(assumption) {}
    [[nodiscard]] int assumption() const noexcept { return assumption_; }

private:
    int assumption_;
};

class InfeasibleProjection : public Error {
public:
    using Error::Error;
};

/// The moving set became empty at some time.
class SafeLoadViolation : public Error {
public:
    SafeLoadViolation(double time, const std::string& what)
        : Error(what), time_(time) {}
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

class InvalidInitialCondition : public Error {
public:
    using Error::Error;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

class UnsupportedLoad : public Error {
public:
    using Error::Error;
};

class DegenerateMetrics : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace lsm
