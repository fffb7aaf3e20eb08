#pragma once

#include <stdexcept>
#include <string>

namespace cmaccm {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input data violates a documented invariant (bad pmf, bad channel file, ...).
// The CLI maps these to exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

// Caller misuse: unknown variable label, index out of range, bad flag
// combination. The CLI maps these to exit code 2.
struct UsageError : Error {
    using Error::Error;
};

// A sweep or enumeration would exceed its configured work cap.
struct BudgetError : Error {
    using Error::Error;
};

// Argument outside a function's mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

// Rejection sampling failed to produce a typical codeword within the
// attempt cap.
struct GenerationError : Error {
    using Error::Error;
};

}  // namespace cmaccm
