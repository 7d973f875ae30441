#pragma once

#include <stdexcept>
#include <string>

namespace qfiport {

// Matrix dimension exceeds the configured 8x8 cap.
struct size_error : std::length_error {
    using std::length_error::length_error;
};

// Eigen-iteration failed to converge; carries the off-diagonal residual.
struct numerical_error : std::runtime_error {
    double residual;
    numerical_error(const std::string& msg, double res)
        : std::runtime_error(msg), residual(res) {}
};

// Input required to be positive semidefinite has a significantly negative eigenvalue.
struct not_psd_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Eigenvalue crossing detected inside a finite-difference stencil.
struct crossing_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A protocol run post-selected itself into zero probability.
struct degenerate_run_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid combination of scheme configuration fields.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace qfiport
