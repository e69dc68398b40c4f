#pragma once

#include <stdexcept>
#include <string>

namespace chirpsense {

// Raised when a certified computation cannot distinguish the result at the
// current precision (e.g. a value indistinguishable from a half-integer).
// Callers escalate precision and retry.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a linear solve meets a pivot below tolerance.
class IllConditionedError : public std::runtime_error {
public:
    explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace chirpsense
