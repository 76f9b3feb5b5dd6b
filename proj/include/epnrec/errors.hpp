#ifndef EPNREC_ERRORS_HPP
#define EPNREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace epnrec {

// Base for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input file / schema violation.
struct ConfigError : Error {
    using Error::Error;
};

// A model invariant does not hold (empty retailer list, crossing
// fragility curves, missing class mapping, ...).
struct ModelError : Error {
    using Error::Error;
};

// Floating-point range problem (overflow/underflow that would silently
// corrupt a probability or normalization).
struct NumericError : Error {
    using Error::Error;
};

// A combinatorial enumeration would exceed the configured budget.
struct BudgetError : Error {
    using Error::Error;
};

// Caller broke an API contract (e.g. repair action referencing a
// component that is already repaired).
struct ContractError : Error {
    using Error::Error;
};

}  // namespace epnrec

#endif
