#ifndef QCOV_ERROR_HPP
#define QCOV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qcov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unsupported input file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Shapes or lengths that do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A value violating a documented precondition or type invariant.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Numerical routine that failed to converge or hit a degenerate input.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace qcov

#endif  // QCOV_ERROR_HPP
