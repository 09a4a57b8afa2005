#pragma once

#include <stdexcept>
#include <string>

namespace chf {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user-supplied input: data files, case files, CLI arguments.
class InputError : public Error {
public:
    using Error::Error;
};

/// Query outside a table's covered range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A CHF model could not produce a usable prediction.
class ModelError : public Error {
public:
    using Error::Error;
};

/// The axial march failed (property range exceeded, non-physical state).
class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace chf
