#pragma once

#include <stdexcept>
#include <string>

namespace nbpc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A conditional probability was requested after a prefix outside the support.
class ZeroMassPrefix : public Error {
public:
    using Error::Error;
};

/// Exhaustive enumeration was requested over a support that is too large.
class SupportTooLarge : public Error {
public:
    using Error::Error;
};

/// A bit string does not have the length an operation requires.
class InvalidLength : public Error {
public:
    using Error::Error;
};

/// Bytes or an in-memory encoding violate the container format.
class MalformedEncoding : public Error {
public:
    using Error::Error;
};

/// A configuration file or command-line value could not be interpreted.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A golden vector did not reproduce.
class VectorMismatch : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace nbpc
