#ifndef OPGF_ERRORS_HPP
#define OPGF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opgf
{
/// Root of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or malformed argument.
class InvalidInput : public Error
{
public:
    using Error::Error;
};

/// A family parameter (lambda, a, b) outside its validity range.
class ParameterError : public Error
{
public:
    using Error::Error;
};

/// lambda = 1 requested for a classification family; the caller must use the free Meixner family.
class RedirectError : public ParameterError
{
public:
    using ParameterError::ParameterError;
};

class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Evaluation point outside the validity region of a closed form.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// f(z) - x landed on the cut of the principal logarithm.
class BranchError : public DomainError
{
public:
    using DomainError::DomainError;
};

class NumericalError : public Error
{
public:
    using Error::Error;
};

/// Recurrence coefficient lost positivity during the Stieltjes procedure.
class NumericalBreakdown : public NumericalError
{
public:
    NumericalBreakdown(const std::string& what, int index) : NumericalError(what), index_(index) {}
    [[nodiscard]] int index() const noexcept { return index_; }

private:
    int index_;
};

class InconsistencyError : public Error
{
public:
    using Error::Error;
};
} // namespace opgf

#endif // OPGF_ERRORS_HPP
