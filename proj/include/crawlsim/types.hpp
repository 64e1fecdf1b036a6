#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace crawlsim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A model hypothesis required by an operation does not hold.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed scenario/config input.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool exact_equal(const Vector& a, const Vector& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

inline bool exact_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

/// Sample point at which a checked quantity attains an extremum.
struct Witness {
    std::string label;
    double t = 0.0;
    double value = 0.0;
    Vector state;
};

}  // namespace crawlsim
