#pragma once

#include <stdexcept>
#include <string>

namespace hoplink {

// Every error the library raises for bad input derives from Error, so callers
// (the CLI in particular) can separate validation failures from internal bugs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vector/matrix sizes that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A non-finite value appeared during a numeric update.
class NumericError : public Error {
public:
    using Error::Error;
};

// Input that carries no information for the requested operation
// (all-zero usage matrix, empty training set).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// Invalid generator, job or experiment configuration.
class SpecError : public Error {
public:
    using Error::Error;
};

// A value outside its admissible range (negative count, probability > 1).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace hoplink
