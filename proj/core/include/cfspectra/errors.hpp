#pragma once

#include <stdexcept>
#include <string>

namespace cfspectra {

// Base class so callers can map the whole family to one exit path.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two enclosures still overlap at the escalation ceiling and neither side
// carries an exact form that settles the order.
struct IndistinguishableError : Error {
    using Error::Error;
};

// A computation needed data beyond the supplied horizon (e.g. MinTail
// envelope without a monotone-tail hint, or an alpha-plan threshold that
// never persists within n_max).
struct HorizonError : Error {
    using Error::Error;
};

// An enumeration or materialization would exceed its declared budget.
struct BudgetError : Error {
    using Error::Error;
};

// A covering run was asked to proceed with K^eps <= 2*M_eps.
struct GateError : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

} // namespace cfspectra
