#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbcv {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input: bad syntax, unknown names, invalid parameters.
class InputError : public Error {
public:
    using Error::Error;
};

/// Expression syntax error. Offsets are 0-based byte positions in the source.
class ParseError : public InputError {
public:
    ParseError(std::string message, std::size_t offset, std::vector<std::string> expected = {});

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// A computation could not produce a trustworthy number.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Evaluation outside the domain of a function or field (log of a
/// non-positive number, point outside a grid mask, ...).
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
public:
    QuadratureError(std::string message, std::size_t budget)
        : NumericalError(std::move(message)), budget_(budget) {}

    std::size_t budget() const noexcept { return budget_; }

private:
    std::size_t budget_;
};

}  // namespace gbcv
