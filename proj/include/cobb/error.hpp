#pragma once

#include <stdexcept>
#include <string>

namespace cobb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (tensor dimensions, raster sizes, list lengths).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Geometry that cannot support the requested construction.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents or values outside their documented domain.
class FormatError : public Error {
public:
    using Error::Error;
};

class InsufficientInputError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

} // namespace cobb
