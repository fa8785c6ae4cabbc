#pragma once

#include <stdexcept>
#include <string>

namespace hws {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files (CSV, column specs, trace files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A column spec that does not match the table it is applied to.
class SpecError : public Error {
public:
    using Error::Error;
};

/// A caller violated a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss or parameter.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace hws
