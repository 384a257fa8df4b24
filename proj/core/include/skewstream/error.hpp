#pragma once

#include <stdexcept>
#include <string>

namespace skewstream {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class EmptyWindowError : public Error {
public:
    EmptyWindowError() : Error("window contains no events") {}
};

class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::size_t event_index)
        : Error(what + " (event " + std::to_string(event_index) + ")"), event_index_(event_index) {}

    std::size_t event_index() const noexcept { return event_index_; }

private:
    std::size_t event_index_;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

class UndefinedMetric : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace skewstream
