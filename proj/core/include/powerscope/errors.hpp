#pragma once

#include <stdexcept>

namespace powerscope {

// Base class for every failure raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: unreadable files, bad cells, violated
// table invariants, unknown counters. Maps to CLI exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

// Numerically invalid operation: rank-deficient designs, degenerate fits,
// physically impossible extractions. Maps to CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace powerscope
