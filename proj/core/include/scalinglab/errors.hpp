#pragma once

#include <stdexcept>
#include <string>

namespace scalinglab {

/// Numerical blow-up (NaN/Inf state) during explicit integration or training.
/// `when` is the failing time (or epoch index) in the caller's units.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& message, double when)
        : std::runtime_error(message), when_(when) {}
    double when() const { return when_; }

private:
    double when_;
};

/// A lookup fell outside the span of a sampled grid (e.g. a reference
/// trajectory too short to cover the requested rescaled times).
class CoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A prediction query required measurements outside the measured range.
class PredictionRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace scalinglab
