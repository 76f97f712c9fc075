#pragma once

#include <stdexcept>
#include <string>

namespace loia {

// Bad user-supplied parameter (n < 1, odd antenna count, empty SNR grid, ...).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A channel link is singular / too ill-conditioned to invert.
struct SingularityError : std::runtime_error {
    explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Construction degenerated (rank-deficient precoder, defective eigenbasis).
struct DegeneracyError : std::runtime_error {
    explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Alignment residual above the gate required before filter construction.
struct AlignmentError : std::runtime_error {
    explicit AlignmentError(const std::string& msg) : std::runtime_error(msg) {}
};

// A node consumed a matrix that is not in its knowledge set.
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace loia
