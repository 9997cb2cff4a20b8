#pragma once

#include <stdexcept>
#include <string>

namespace rwvd {

// Runtime failures map to CLI exit code 1, configuration failures to 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class NotMaterializable : public Error {
public:
    using Error::Error;
};

class InsufficientRange : public Error {
public:
    using Error::Error;
};

class InvalidDistribution : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class FeasibilityError : public Error {
public:
    using Error::Error;
};

// Second-moment ratio with an empty first moment.
class Undefined : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace rwvd
