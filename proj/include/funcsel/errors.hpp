#pragma once

#include <stdexcept>
#include <string>

namespace funcsel {

// Invalid hyperparameters, malformed configuration, violated preconditions.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed or inconsistent input data (grids, CSV, shapes of user data).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dimension mismatch between network parameters and inputs.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// NaN/Inf encountered during optimization.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, long iteration, double learning_rate)
        : std::runtime_error(msg), iteration(iteration), learning_rate(learning_rate) {}
    long iteration;
    double learning_rate;
};

// Ill-conditioned linear algebra (rank-deficient design, non-finite Hessian).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Retained parameter count exceeds the dense-eigendecomposition cap.
class EvidenceTooLargeError : public std::runtime_error {
public:
    EvidenceTooLargeError(const std::string& msg, int dim, int cap)
        : std::runtime_error(msg), dim(dim), cap(cap) {}
    int dim;
    int cap;
};

}  // namespace funcsel
