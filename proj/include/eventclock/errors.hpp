#pragma once

#include <stdexcept>
#include <string>

namespace eventclock {

/// A computed quantity failed a numerical check it is contractually bound to
/// pass (unitarity, idempotency, real expectation, wrap-around guard, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flag certification failed for an operator that must carry the flag.
class CertificationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace eventclock
