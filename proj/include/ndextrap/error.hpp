#pragma once

#include <stdexcept>
#include <string>

namespace ndextrap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument is outside its documented domain (shape mismatch, index out of range, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A composite input failed validation; `index()` names the offending element when known.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, long index = -1) : Error(what), index_(index) {}
    long index() const noexcept { return index_; }

private:
    long index_;
};

/// A documented operator precondition was violated by the caller.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A numerical self-check failed, which indicates a bug rather than bad input.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

class SynthesisError : public Error {
public:
    using Error::Error;
};

/// A metric whose defining ratio has a zero denominator.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

/// Binary or text file content does not match its format.
class FormatError : public Error {
public:
    FormatError(const std::string& what, long long offset = -1) : Error(what), offset_(offset) {}
    long long offset() const noexcept { return offset_; }

private:
    long long offset_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ndextrap
