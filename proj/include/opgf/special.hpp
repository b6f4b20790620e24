#ifndef OPGF_SPECIAL_HPP
#define OPGF_SPECIAL_HPP

#include "opgf/errors.hpp"
#include "opgf/recurrence.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace opgf
{
using cplx = std::complex< double >;

/// Rising factorial (lambda)_n = lambda (lambda + 1) ... (lambda + n - 1); (lambda)_0 = 1.
inline double pochhammer(double lambda, int n)
{
    if (n < 0)
        throw PreconditionError("pochhammer: n must be >= 0");
    double p = 1.0;
    for (int k = 0; k < n; ++k)
        p *= lambda + k;
    return p;
}

/// Table of (lambda)_n / n! for n = 0..n_max, built by the ratio (lambda + n) / (n + 1).
inline std::vector< double > pochhammer_over_factorial(double lambda, int n_max)
{
    std::vector< double > c(static_cast< std::size_t >(n_max) + 1);
    c[0] = 1.0;
    for (int n = 0; n < n_max; ++n)
        c[static_cast< std::size_t >(n) + 1] = c[static_cast< std::size_t >(n)] * (lambda + n) / (n + 1);
    return c;
}

/// w^p with the principal logarithm; throws BranchError on the closed negative axis unless p is an integer.
inline cplx principal_power(cplx w, double p)
{
    if (w.imag() == 0.0 && w.real() <= 0.0 && p != std::round(p))
        throw BranchError("principal power undefined on the non-positive real axis");
    if (p == std::round(p) && std::abs(p) <= 64.0)
    {
        const int k   = static_cast< int >(std::abs(p));
        cplx      acc = 1.0;
        for (int i = 0; i < k; ++i)
            acc *= w;
        return p < 0.0 ? 1.0 / acc : acc;
    }
    return std::exp(p * std::log(w));
}

inline bool on_negative_axis(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0; }

/// Roots of a0 + a1 z + a2 z^2 (a2 may vanish), computed in the cancellation-free form.
inline std::vector< cplx > quadratic_roots(double a0, double a1, double a2)
{
    if (a2 == 0.0)
    {
        if (a1 == 0.0)
            return {};
        return {cplx(-a0 / a1, 0.0)};
    }
    const cplx disc = std::sqrt(cplx(a1 * a1 - 4.0 * a2 * a0, 0.0));
    const cplx q    = -0.5 * (cplx(a1, 0.0) + (a1 >= 0.0 ? disc : -disc));
    if (std::abs(q) == 0.0)
        return {cplx(0.0), cplx(0.0)};
    return {q / a2, cplx(a0, 0.0) / q};
}

/// Monic Jacobi polynomials p_n^{(a,b)} on [-1, 1], weight (1 - y)^a (1 + y)^b, a, b > -1.
inline JacobiSzegoSequence monic_jacobi_sequence(double a, double b)
{
    if (!(a > -1.0) || !(b > -1.0))
        throw ParameterError("monic Jacobi parameters must exceed -1");
    auto alpha = [a, b](int n) {
        if (a == b)
            return 0.0;
        if (n == 0)
            return (b - a) / (a + b + 2.0);
        const double s = 2.0 * n + a + b;
        return (b * b - a * a) / (s * (s + 2.0));
    };
    auto omega = [a, b](int n) {
        if (n == 1)
            return 4.0 * (1.0 + a) * (1.0 + b) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
        const double s = 2.0 * n + a + b;
        return 4.0 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    };
    return JacobiSzegoSequence(alpha, omega, false);
}

/// Monic Gegenbauer C_n^mu on [-1, 1]; mu > -1/2.
inline JacobiSzegoSequence monic_gegenbauer_sequence(double mu)
{
    if (!(mu > -0.5))
        throw ParameterError("Gegenbauer parameter must exceed -1/2");
    return monic_jacobi_sequence(mu - 0.5, mu - 0.5);
}
} // namespace opgf

#endif // OPGF_SPECIAL_HPP
