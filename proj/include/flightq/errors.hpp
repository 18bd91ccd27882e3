#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace flightq {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct InvalidSpec : Error { using Error::Error; };
struct InvalidRate : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct TooFewSlots : Error { using Error::Error; };

// pattern queue
struct DuplicateDrone : Error { using Error::Error; };
struct PolicyMismatch : Error { using Error::Error; };
struct SwapWindowTooShort : Error { using Error::Error; };
struct SlotEmpty : Error { using Error::Error; };

// dispatch
struct RateMismatch : Error {
    double residual;
    RateMismatch(const std::string& msg, double r) : Error(msg), residual(r) {}
};
struct EmptyOpeningSet : Error { using Error::Error; };
struct UnmappedDroneClass : Error { using Error::Error; };
struct UnknownAssignment : Error { using Error::Error; };

// workload
struct InvalidScale : Error { using Error::Error; };

// scenario / cli
struct ParseError : Error { using Error::Error; };

// Carries every validation failure found in a scenario, not just the first.
struct ConfigInvalid : Error {
    std::vector<std::string> issues;
    explicit ConfigInvalid(std::vector<std::string> list);
};

}  // namespace flightq
