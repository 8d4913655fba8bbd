#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frost
{
/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error
{
public:
    using Error::Error;
};

class DegenerateElement : public Error
{
public:
    DegenerateElement(std::size_t element, double area);

    std::size_t element() const { return element_; }

private:
    std::size_t element_;
};

/// Malformed text input; carries the 1-based line (or row) number.
class ParseError : public Error
{
public:
    ParseError(std::size_t line, std::string const& what);

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class InvalidMesh : public Error
{
public:
    using Error::Error;
};

/// Argument outside the validity range of a material law.
class DomainError : public Error
{
public:
    using Error::Error;
};

class InvalidParameters : public Error
{
public:
    using Error::Error;
};

class InvalidPsd : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

class SolverError : public Error
{
public:
    using Error::Error;
};

/// Nonlinear transport step that did not converge.
class StepFailure : public SolverError
{
public:
    StepFailure(std::string const& what, double residual, int iterations);

    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

}  // namespace frost
