#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geointerp {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two interpolation nodes coincide within the coincidence tolerance.
class RepeatedNodes : public Error {
public:
    using Error::Error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The preconditioning parameter leaves a transformed difference or
/// determinant non-positive.
class EpsilonTooLarge : public Error {
public:
    using Error::Error;
};

class NotQuadratic : public Error {
public:
    using Error::Error;
};

/// The determinants required by the quadratic closed form do not share a
/// strict sign.
class InadmissibleDeterminants : public Error {
public:
    using Error::Error;
};

class OutOfInterval : public Error {
public:
    using Error::Error;
};

/// Bisection bracket does not straddle a root.
class NoSignChange : public Error {
public:
    using Error::Error;
};

class SolveFailed : public Error {
public:
    SolveFailed(const std::string& what, std::size_t completed_scales)
        : Error(what), completed_scales_(completed_scales) {}

    std::size_t completed_scales() const noexcept { return completed_scales_; }

private:
    std::size_t completed_scales_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class OddCount : public Error {
public:
    using Error::Error;
};

class TooFew : public Error {
public:
    using Error::Error;
};

}  // namespace geointerp
