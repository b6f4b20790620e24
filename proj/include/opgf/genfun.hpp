#ifndef OPGF_GENFUN_HPP
#define OPGF_GENFUN_HPP

// Ultraspherical-type generating functions
//
//     psi(z, x) = sum_n (lambda)_n / n! P_n(x) z^n = 1 / (u(z) (f(z) - x)^lambda)
//
// with z f(z) and u(z) / z^lambda analytic near 0 and both tending to 1.

#include "opgf/errors.hpp"
#include "opgf/measures.hpp"
#include "opgf/recurrence.hpp"
#include "opgf/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>

namespace opgf
{
using ComplexFn = std::function< cplx(cplx) >;

/// Quadratic c[0] + c[1] z + c[2] z^2.
using Quadratic = std::array< double, 3 >;

inline cplx eval(const Quadratic& c, cplx z) { return c[0] + z * (c[1] + z * c[2]); }
inline cplx eval_derivative(const Quadratic& c, cplx z) { return c[1] + 2.0 * c[2] * z; }

struct GenFunClosedForm
{
    Family   family{};
    double   lambda{};
    double   alpha1{}; ///< Jacobi-Szego parameters the closed form belongs to
    double   omega2{};
    Interval support;

    /// z f(z), and u(z) = z^lambda u_num(z) / u_den(z).
    Quadratic zf_coeffs{};
    Quadratic u_num{};
    Quadratic u_den{};

    ComplexFn f;
    ComplexFn f_prime;
    ComplexFn u;
    ComplexFn u_prime;
    ComplexFn g; ///< f - Q1 / 2 with Q1(z) = (lambda + 1) omega2 z + alpha1
    ComplexFn u_scaled; ///< u(z) / z^lambda

    double domain_radius{};
    bool   excludes_negative_axis{};
};

namespace detail
{
inline double min_root_modulus(const Quadratic& c)
{
    double r = std::numeric_limits< double >::infinity();
    for (cplx root : quadratic_roots(c[0], c[1], c[2]))
        if (std::abs(root) > 0.0)
            r = std::min(r, std::abs(root));
    return r;
}
} // namespace detail

inline constexpr double domain_safety_factor = 0.9;

/// Closed forms for one catalog measure.
inline GenFunClosedForm closed_form(const MeasureSpec& m)
{
    const double lambda = m.lambda;
    GenFunClosedForm cf;
    cf.family  = m.family;
    cf.lambda  = lambda;
    cf.support = m.support;
    const JacobiSzegoSequence seq = recurrence_of(m);
    cf.alpha1 = seq.alpha(1);
    cf.omega2 = seq.omega(2);

    switch (m.family)
    {
    case Family::Sym1:
        cf.zf_coeffs = {1.0, 0.0, 0.5 * (1.0 + lambda)};
        cf.u_num     = {1.0, 0.0, 0.0};
        cf.u_den     = {1.0, 0.0, 0.0};
        break;
    case Family::Sym2:
        cf.zf_coeffs = {1.0, 0.0, 0.5 * lambda};
        cf.u_num     = {1.0, 0.0, 0.0};
        cf.u_den     = {1.0, 0.0, -0.5 * lambda};
        break;
    case Family::NonSymPlus:
    case Family::NonSymMinus: {
        const double s    = std::sqrt(2.0 * lambda - 1.0);
        const double sign = m.family == Family::NonSymPlus ? 1.0 : -1.0;
        cf.zf_coeffs      = {1.0, sign / s, lambda * lambda / (s * s)};
        // +-(s / lambda) z^lambda / (z +- s / lambda) = z^lambda s / (s +- lambda z)
        cf.u_num = {s, 0.0, 0.0};
        cf.u_den = {s, sign * lambda, 0.0};
        break;
    }
    case Family::FreeMeixner:
        cf.zf_coeffs = {1.0, m.a, 1.0 + m.b};
        cf.u_num     = {1.0, 0.0, 0.0};
        cf.u_den     = {1.0, m.a, m.b};
        break;
    }

    const Quadratic zf = cf.zf_coeffs, num = cf.u_num, den = cf.u_den;
    cf.f       = [zf](cplx z) { return eval(zf, z) / z; };
    cf.f_prime = [zf](cplx z) { return zf[2] - zf[0] / (z * z); };
    cf.u_scaled = [num, den](cplx z) { return eval(num, z) / eval(den, z); };
    cf.u       = [num, den, lambda](cplx z) { return principal_power(z, lambda) * eval(num, z) / eval(den, z); };
    cf.u_prime = [num, den, lambda](cplx z) {
        const cplx u = principal_power(z, lambda) * eval(num, z) / eval(den, z);
        return u * (lambda / z + eval_derivative(num, z) / eval(num, z) - eval_derivative(den, z) / eval(den, z));
    };
    const double q1_slope = 0.5 * (lambda + 1.0) * cf.omega2, q1_const = 0.5 * cf.alpha1;
    cf.g = [zf, q1_slope, q1_const](cplx z) { return eval(zf, z) / z - q1_slope * z - q1_const; };

    // Smallest modulus among: zeros of z f, zeros/poles of u / z^lambda, zeros of z (f - x) at the
    // support endpoints, and the circle |z| = 1 / sqrt(c2) beyond which f may turn real off the axis.
    double r = std::min({detail::min_root_modulus(zf), detail::min_root_modulus(num), detail::min_root_modulus(den)});
    for (double x : {m.support.lo, m.support.hi})
        r = std::min(r, detail::min_root_modulus({zf[0], zf[1] - x, zf[2]}));
    if (zf[2] > 0.0)
        r = std::min(r, 1.0 / std::sqrt(zf[2]));
    cf.domain_radius          = domain_safety_factor * r;
    cf.excludes_negative_axis = lambda != std::round(lambda);
    return cf;
}

inline GenFunClosedForm closed_form(Family family, double lambda, double a = 0.0, double b = 0.0)
{
    return closed_form(build_measure(family, lambda, a, b));
}

namespace detail
{
inline void check_domain(const GenFunClosedForm& cf, cplx z, const char* who)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidInput(std::string(who) + ": z must be finite");
    if (std::abs(z) >= cf.domain_radius)
        throw DomainError(std::string(who) + ": |z| = " + std::to_string(std::abs(z)) +
                          " outside the domain radius " + std::to_string(cf.domain_radius));
}

inline std::string point_str(cplx z, double x)
{
    return "(z = " + format_g17(z.real()) + (z.imag() < 0 ? "" : "+") + format_g17(z.imag()) +
           "i, x = " + format_g17(x) + ")";
}
} // namespace detail

/// 1 / (u(z) exp(lambda Log(f(z) - x))), principal logarithm.
inline cplx psi_closed(const GenFunClosedForm& cf, cplx z, double x)
{
    detail::check_domain(cf, z, "psi_closed");
    if (z == cplx(0.0))
        return 1.0;
    if (cf.excludes_negative_axis && on_negative_axis(z))
        throw DomainError("psi_closed: z on the negative real axis " + detail::point_str(z, x));
    const cplx w = cf.f(z) - x;
    if (w == cplx(0.0))
        throw BranchError("psi_closed: f(z) - x vanishes at " + detail::point_str(z, x));
    try
    {
        return 1.0 / (cf.u(z) * principal_power(w, cf.lambda));
    }
    catch (const BranchError&)
    {
        throw BranchError("psi_closed: f(z) - x on the branch cut at " + detail::point_str(z, x));
    }
}

/// Same function through its analytic form 1 / ((u(z)/z^lambda) (z f(z) - x z)^lambda), which is
/// regular on the whole disk, including the negative real axis.
inline cplx psi_analytic(const GenFunClosedForm& cf, cplx z, double x)
{
    detail::check_domain(cf, z, "psi_analytic");
    const Quadratic& c = cf.zf_coeffs;
    const cplx       w = c[0] + z * ((c[1] - x) + z * c[2]);
    if (w.imag() == 0.0 && w.real() <= 0.0)
        throw BranchError("psi_analytic: z (f(z) - x) on the branch cut at " + detail::point_str(z, x));
    return 1.0 / (cf.u_scaled(z) * principal_power(w, cf.lambda));
}

struct SeriesResult
{
    cplx   value{};
    double last_term{}; ///< magnitude of the last retained term
    int    terms{};
    bool   warning{}; ///< tail indicator above 1e-8 |partial sum|
};

inline constexpr double series_warning_ratio = 1e-8;
inline constexpr double series_stop_ratio    = 1e-15;
inline constexpr int    series_max_terms     = 200;

namespace detail
{
/// Partial sums of sum_n coeff[n] P_n(x) z^n; stops early after three consecutive negligible terms
/// when `adaptive` is set.
inline SeriesResult ucoeff_series(const JacobiSzegoSequence& seq, const std::vector< double >& coeff, cplx z, double x,
                                  int n_terms, bool adaptive)
{
    SeriesResult res;
    double       prev = 0.0, cur = 1.0;
    cplx         zn = 1.0;
    int          small_run = 0;
    for (int n = 0; n < n_terms; ++n)
    {
        const cplx term = coeff[static_cast< std::size_t >(n)] * cur * zn;
        res.value += term;
        res.last_term = std::abs(term);
        res.terms     = n + 1;
        if (adaptive)
        {
            small_run = res.last_term < series_stop_ratio * std::abs(res.value) ? small_run + 1 : 0;
            if (small_run >= 3)
                break;
        }
        const double next = (x - seq.alpha(n)) * cur - seq.omega(n) * prev;
        prev              = cur;
        cur               = next;
        zn *= z;
    }
    res.warning = res.last_term > series_warning_ratio * std::abs(res.value);
    return res;
}
} // namespace detail

/// Partial sum over n < n_terms of (lambda)_n / n! P_n(x) z^n.
inline SeriesResult psi_series(const JacobiSzegoSequence& seq, double lambda, cplx z, double x, int n_terms)
{
    if (n_terms < 1)
        throw PreconditionError("psi_series: n_terms must be >= 1");
    return detail::ucoeff_series(seq, pochhammer_over_factorial(lambda, n_terms), z, x, n_terms, false);
}

/// Truncation by the ratio test: three consecutive terms below 1e-15 |sum|, at most 200 terms.
inline SeriesResult psi_series_auto(const JacobiSzegoSequence& seq, double lambda, cplx z, double x)
{
    return detail::ucoeff_series(seq, pochhammer_over_factorial(lambda, series_max_terms), z, x, series_max_terms,
                                 true);
}

struct MomentTriple
{
    double m0{}, m1{}, m2{};
};

/// Contract values: m0 = 1, m1 = lambda z, m2 = lambda (lambda + 1) / 2 omega2 z^2 + lambda alpha1 z + 1.
inline MomentTriple predicted_moments(double lambda, double alpha1, double omega2, double z)
{
    return {1.0, lambda * z, 0.5 * lambda * (lambda + 1.0) * omega2 * z * z + lambda * alpha1 * z + 1.0};
}

inline constexpr int min_moment_order = 12;

/// Moments of the tilted measure psi(z, x) mu(dx), real z, by Gauss quadrature.
inline MomentTriple psi_family_moments(const MeasureSpec& m, const GenFunClosedForm& cf, double z, int order)
{
    if (order < min_moment_order)
        throw PreconditionError("psi_family_moments: quadrature order must be >= 12");
    detail::check_domain(cf, z, "psi_family_moments");
    const QuadratureRule rule = gauss_quadrature(m, order);
    MomentTriple         mt;
    for (std::size_t i = 0; i < rule.size(); ++i)
    {
        const double x  = rule.nodes[i];
        const double wp = rule.weights[i] * psi_analytic(cf, z, x).real();
        mt.m0 += wp;
        mt.m1 += wp * x;
        mt.m2 += wp * x * x;
    }
    return mt;
}
} // namespace opgf

#endif // OPGF_GENFUN_HPP
