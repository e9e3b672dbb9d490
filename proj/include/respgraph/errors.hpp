#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace respgraph {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input row; carries the 1-based line number within the file.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A trace invariant does not hold (dangling reference, duplicate id,
/// position gap, ...). The message names the violated invariant.
class IntegrityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// statfit
class InsufficientData : public Error {
public:
    using Error::Error;
};
class DegenerateSupport : public Error {
public:
    using Error::Error;
};
class NonPositiveSample : public Error {
public:
    using Error::Error;
};
class NonPositiveVariance : public Error {
public:
    using Error::Error;
};
class ZeroVariance : public Error {
public:
    using Error::Error;
};
class LengthMismatch : public Error {
public:
    using Error::Error;
};

// graph
class DegenerateInput : public Error {
public:
    using Error::Error;
};

// crawlsim
class SourceError : public Error {
public:
    using Error::Error;
};
class ExhaustedDictionary : public Error {
public:
    using Error::Error;
};

} // namespace respgraph
