#pragma once

#include <stdexcept>
#include <string>

namespace syncat {

/// Input violates a documented precondition: bad probability mass, a word the
/// partition does not cover, an argument combination the operation rejects.
/// The command-line driver maps this family to exit code 1.
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text input was readable but malformed (bad manifest row, bad JSON shape).
/// A kind of validation failure; messages carry the offending location.
class parse_error : public validation_error {
public:
    using validation_error::validation_error;
};

/// An exact-enumeration guard would be exceeded (factorial shuffle closure,
/// Bell-number partition sweeps). Raised before any large allocation happens.
class resource_error : public validation_error {
public:
    using validation_error::validation_error;
};

/// A file could not be opened, read, or written. The command-line driver maps
/// this to exit code 2; the message names the path.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant failed beyond numerical tolerance (for example the
/// entropy ordering between the projected, shuffled, and unigram baselines).
/// Indicates a bug in this library, never a user error.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace syncat
