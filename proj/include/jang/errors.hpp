#pragma once

#include <stdexcept>
#include <string>

namespace jang {

// Bad configuration, malformed input files, invalid data descriptors.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation outside the data domain or other precondition violations.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class SolveErrorCode {
    InteriorBlowup,    // |v| -> 1 at interior r: violated outermost-horizon condition
    StepUnderflow,     // adaptive step shrank below machine resolution
    BadHorizonSlope,   // theta_{-,r}(0) <= 0 at a singular start ("perturb data")
    BadBoundary,       // |v(0)|=1 requested on None/Both classification
    PhiNotPositive,    // warping factor hit zero at an interior node
    ResidualGate,      // unreduced-form cross residual exceeded the solve gate
};

struct SolveError : std::runtime_error {
    SolveErrorCode code;
    double r_fail;
    SolveError(SolveErrorCode c, const std::string& msg, double r = 0.0)
        : std::runtime_error(msg), code(c), r_fail(r) {}
};

}  // namespace jang
