// Error types shared across modules.
#pragma once

#include <stdexcept>
#include <string>

namespace svlie {

struct SyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violation of the consecutive-index letter-sequence convention.
struct ConventionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownVariable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation failure: division by zero or non-finite result.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BindingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All samples at the finest sampling scale were discarded.
struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CertificateMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooFewConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniqueness hypothesis for Cauchy problems is not guaranteed by the
// declared regularity (merely continuous fields are rejected).
struct UniquenessHypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace svlie
