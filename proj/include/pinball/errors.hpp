#pragma once

#include <stdexcept>
#include <string>

namespace pinball {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation
/// (vertex arc length, |theta| >= pi/2, lambda outside (0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Angle that cannot be bracketed by any partial sum of the signed series.
class OutOfCantorRange : public Error {
public:
    using Error::Error;
};

/// Target angle of a connecting word is not in C(lambda).
class NotInCantor : public Error {
public:
    using Error::Error;
};

class WordTooShort : public Error {
public:
    using Error::Error;
};

/// Horizontal interval outside the Markovian band |theta| < pi/6.
class NotMarkovian : public Error {
public:
    using Error::Error;
};

/// Orbit record does not return to its starting point.
class NotClosed : public Error {
public:
    using Error::Error;
};

class EmptyWord : public Error {
public:
    using Error::Error;
};

/// Malformed input file (CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

/// File cannot be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pinball
