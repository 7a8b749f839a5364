#pragma once

#include <stdexcept>
#include <string>

namespace kbm {

// Exit-code taxonomy used by the CLI: 2 domain, 3 precision, 4 resource.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A certified computation could not reach the requested width/certainty
// even after the precision ladder hit its cap.
struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two balls overlap; the comparison carries no information at this precision.
struct IndeterminateComparison : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A paper constant failed its upward-rounding direction check.
struct ChainViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CorruptCheckpoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dujella-Petho scan ran out of convergents without a certified epsilon > 0.
struct NoPositiveEpsilon : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kbm
