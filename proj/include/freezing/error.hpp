#pragma once

#include <stdexcept>
#include <string>

namespace freezing {

/// Base of all library errors. `numerical()` separates bad input from
/// algorithmic failure; the CLI maps the two to different exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual bool numerical() const noexcept { return false; }
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what = "dimension mismatch") : Error(what) {}
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class NotSymmetric : public Error {
public:
    using Error::Error;
};

class NotRealRooted : public Error {
public:
    using Error::Error;
    bool numerical() const noexcept override { return true; }
};

class NoConvergence : public Error {
public:
    using Error::Error;
    bool numerical() const noexcept override { return true; }
};

class StepUnstable : public Error {
public:
    using Error::Error;
    bool numerical() const noexcept override { return true; }
};

} // namespace freezing
