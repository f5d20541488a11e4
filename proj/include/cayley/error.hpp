#pragma once

#include <stdexcept>
#include <string>

namespace cayley {

/// Malformed input: mismatched groups, bad literals, out-of-range indices.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation declined to run because an enumeration guard was exceeded.
class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical invariant that must hold on every output was violated.
/// Always an implementation bug (or a false theorem).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

inline void ensure(bool ok, const std::string& what) {
    if (!ok) throw InvariantViolation(what);
}

} // namespace cayley
