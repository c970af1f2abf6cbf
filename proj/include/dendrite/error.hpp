#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dendrite {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched or unsupported dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Argument outside its valid domain (grid range, negative step, bad basis, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A non-finite value was produced or supplied at a given sample index.
class NonFiniteError : public Error {
public:
    NonFiniteError(const std::string& what, std::size_t index)
        : Error(what + " (sample index " + std::to_string(index) + ")"), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Zero-length steps, zero distances, collapsed perimeters.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Two trees whose branch structure does not correspond.
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Evaluation would exceed the configured node cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// An analyzer precondition does not hold (too few branch points, not a tree, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Malformed input text (CSV, JSON).
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace dendrite
