#pragma once

#include <stdexcept>
#include <string>

namespace pseudohopf {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something that violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A declared component class disagrees with the field's jet.
class ClassificationError : public Error {
public:
    using Error::Error;
};

// Configuration or descriptor could not be parsed or validated.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Numerical procedure did not produce a trustworthy answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

class WrongLaunchDirection : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TimeCapExceeded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StepCapExceeded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class HalfPlaneViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Sign data could not be established (center, or window too large).
class DegenerateSigns : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Predictor hypothesis fails (leading displacement coefficient vanishes).
class PredictorRefused : public Error {
public:
    using Error::Error;
};

// Short snake_case name of the most derived library error class.
inline std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const WrongLaunchDirection*>(&e)) return "wrong_launch_direction";
    if (dynamic_cast<const TimeCapExceeded*>(&e)) return "time_cap_exceeded";
    if (dynamic_cast<const StepCapExceeded*>(&e)) return "step_cap_exceeded";
    if (dynamic_cast<const HalfPlaneViolation*>(&e)) return "half_plane_violation";
    if (dynamic_cast<const DegenerateSigns*>(&e)) return "degenerate_signs";
    if (dynamic_cast<const NumericalError*>(&e)) return "numerical_error";
    if (dynamic_cast<const PredictorRefused*>(&e)) return "predictor_refused";
    if (dynamic_cast<const ClassificationError*>(&e)) return "classification_error";
    if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
    if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid_argument";
    return "error";
}

}  // namespace pseudohopf
