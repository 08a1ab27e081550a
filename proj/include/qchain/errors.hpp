#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qchain {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape or degree disagreement between operands.
struct DimensionMismatch : Error {
    using Error::Error;
};

// Operands live over different prime fields.
struct FieldMismatch : Error {
    using Error::Error;
};

// An enumeration would produce more than `limit` items.
struct SizeGuardExceeded : Error {
    SizeGuardExceeded(std::size_t required_, std::size_t limit_, int dim_ = -1)
        : Error("size guard exceeded: need " + std::to_string(required_) +
                " items, limit " + std::to_string(limit_) +
                (dim_ >= 0 ? " (dimension " + std::to_string(dim_) + ")" : "")),
          required(required_), limit(limit_), dim(dim_) {}
    std::size_t required;
    std::size_t limit;
    int dim;  // offending dimension, -1 when not degree-indexed
};

struct NotSurjective : Error {
    using Error::Error;
};

// A would-be generator witness fails d(z) = 0.
struct NotACycle : Error {
    using Error::Error;
};

// A would-be generator witness fails eps(z) = d(x).
struct CounitMismatch : Error {
    using Error::Error;
};

// A lifting square that violates its own commutativity invariants.
struct IncompatibleSquare : Error {
    using Error::Error;
};

// A table-backed lifting was asked for a pair it does not cover.
struct FixtureIncomplete : Error {
    using Error::Error;
};

}  // namespace qchain
