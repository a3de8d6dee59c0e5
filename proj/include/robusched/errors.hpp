#ifndef ROBUSCHED_ERRORS_HPP
#define ROBUSCHED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace robusched {

// Base for model-domain failures (CLI exit code 2).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonErgodic : ModelError {
    explicit NonErgodic(const std::string& what) : ModelError(what) {}
};

struct InvalidParam : ModelError {
    explicit InvalidParam(const std::string& what) : ModelError(what) {}
};

struct NegativeTime : ModelError {
    NegativeTime() : ModelError("waiting time must be non-negative") {}
};

struct NegativeDeadline : ModelError {
    NegativeDeadline() : ModelError("deadline must be non-negative") {}
};

struct StencilOutOfBox : ModelError {
    explicit StencilOutOfBox(const std::string& what) : ModelError(what) {}
};

struct InfeasibleCenter : ModelError {
    explicit InfeasibleCenter(const std::string& what) : ModelError(what) {}
};

struct EmptyPolyline : ModelError {
    EmptyPolyline() : ModelError("polyline has no vertices") {}
};

struct TraceUnavailable : ModelError {
    explicit TraceUnavailable(const std::string& what) : ModelError(what) {}
};

// Search-domain failure (CLI exit code 3).
struct NoContactWithinRMax : std::runtime_error {
    explicit NoContactWithinRMax(const std::string& what) : std::runtime_error(what) {}
};

// Configuration/parse failure (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace robusched

#endif
