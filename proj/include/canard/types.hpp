#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace canard {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Parameter bindings by name. std::map keeps iteration order deterministic.
using Params = std::map<std::string, double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression syntax error; `offset` is the byte position in the input text.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t offset_)
        : Error(msg + " at offset " + std::to_string(offset_)), offset(offset_) {}
    std::size_t offset;
};

/// Model configuration rejected (schema violation, undeclared identifier, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Arithmetic domain failure while evaluating an expression (division by
/// zero, log of a non-positive value, ...).
struct EvalError : Error {
    using Error::Error;
};

/// Singular or numerically unusable linear system.
struct SingularSystemError : Error {
    using Error::Error;
};

/// Iterative method failed to converge (Newton, eigensolver).
struct ConvergenceError : Error {
    using Error::Error;
};

/// No Hopf bifurcation in the requested bracket (no sign change, missing
/// complex pair, or a real eigenvalue crossing).
struct NoHopfError : Error {
    using Error::Error;
};

/// First Lyapunov coefficient too close to zero to classify.
struct DegenerateHopfError : Error {
    using Error::Error;
};

/// 2*i*omega0 is (nearly) an eigenvalue of the Jacobian.
struct ResonanceError : Error {
    using Error::Error;
};

/// Trajectory integration failed (blow-up, step underflow, budget).
struct IntegrationError : Error {
    using Error::Error;
};

/// Oracle bracket or classification failure.
struct OracleError : Error {
    using Error::Error;
};

}  // namespace canard
