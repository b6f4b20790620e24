#ifndef OPGF_IDENTITIES_HPP
#define OPGF_IDENTITIES_HPP

// Special-function identities behind the classified generating functions. Every check returns a
// residual (absolute unless stated otherwise); series are summed with classical [-1, 1] recurrences,
// closed forms come straight from the generating-function displays.

#include "opgf/errors.hpp"
#include "opgf/genfun.hpp"
#include "opgf/measures.hpp"
#include "opgf/recurrence.hpp"
#include "opgf/special.hpp"

#include <cmath>
#include <numbers>

namespace opgf
{
/// |log(sqrt(pi) Gamma(2a)) - log(2^{2a-1} Gamma(a) Gamma(a + 1/2))|
inline double duplication_check(double a)
{
    if (!(a > 0.0))
        throw PreconditionError("duplication_check: a must be > 0");
    const double lhs = 0.5 * std::log(std::numbers::pi) + std::lgamma(2.0 * a);
    const double rhs = (2.0 * a - 1.0) * std::numbers::ln2 + std::lgamma(a) + std::lgamma(a + 0.5);
    return std::abs(lhs - rhs);
}

/// Relative difference between (2 lambda - 1)_{2n} / (lambda - 1/2)_n and 4^n (lambda)_n.
inline double pochhammer_ratio_check(double lambda, int n)
{
    if (!(lambda > 0.5) || n < 0)
        throw PreconditionError("pochhammer_ratio_check: need lambda > 1/2, n >= 0");
    const double lhs = pochhammer(2.0 * lambda - 1.0, 2 * n) / pochhammer(lambda - 0.5, n);
    const double rhs = std::ldexp(pochhammer(lambda, n), 2 * n);
    return std::abs(lhs - rhs) / std::abs(rhs);
}

/// |sum_n (lambda)_n y^n / n! - (1 - y)^{-lambda}|, truncated when terms fall below 1e-17.
inline double one_f_zero_reduction(double lambda, double y)
{
    if (!(std::abs(y) < 1.0))
        throw DomainError("one_f_zero_reduction: |y| must be < 1");
    double sum = 0.0, term = 1.0;
    for (int n = 0; n < 5000; ++n)
    {
        sum += term;
        term *= (lambda + n) * y / (n + 1);
        if (std::abs(term) < 1e-17 * std::abs(sum) && n > 2)
            break;
    }
    return std::abs(sum - std::pow(1.0 - y, -lambda));
}

namespace detail
{
/// sum_n coeff[n] scale^n Q_n(x_arg) z^n with Q_n from `seq` evaluated at x_arg; auto-truncated.
inline SeriesResult scaled_series(const JacobiSzegoSequence& seq, double lambda, double scale, cplx z, double x_arg)
{
    return psi_series_auto(seq, lambda, scale * z, x_arg);
}

inline void require_series(const SeriesResult& s, const char* who)
{
    if (s.warning)
        throw NumericalError(std::string(who) + ": series did not converge within 200 terms");
}
} // namespace detail

/// |sum_n 2^n (lambda)_n / n! C_n^lambda(x) z^n - (1 - 2 z x + z^2)^{-lambda}|, monic C_n^lambda.
inline double gegenbauer_gf_check(double lambda, cplx z, double x)
{
    if (!(std::abs(x) <= 1.0) || !(std::abs(z) <= 0.3))
        throw PreconditionError("gegenbauer_gf_check: need |x| <= 1 and |z| <= 0.3");
    const SeriesResult s = detail::scaled_series(monic_gegenbauer_sequence(lambda), lambda, 2.0, z, x);
    detail::require_series(s, "gegenbauer_gf_check");
    return std::abs(s.value - principal_power(1.0 - 2.0 * z * x + z * z, -lambda));
}

/// Monic Gegenbauer rescaled to |x| <= sqrt(2(1 + mu)): (sqrt(2(1+mu)))^n C_n^mu(x / sqrt(2(1+mu))).
inline JacobiSzegoSequence tilde_gegenbauer_sequence(double mu)
{
    const JacobiSzegoSequence base  = monic_gegenbauer_sequence(mu);
    const double              scale = 2.0 * (1.0 + mu);
    return JacobiSzegoSequence([](int) { return 0.0; }, [base, scale](int n) { return scale * base.omega(n); }, true);
}

/// |sum_n (lambda)_n / n! C~_n^lambda(x) z^n - (1 - z x + (1 + lambda) z^2 / 2)^{-lambda}|
inline double tilde_gegenbauer_identity(double lambda, cplx z, double x)
{
    const double r = std::sqrt(2.0 * (1.0 + lambda));
    if (!(std::abs(x) <= r))
        throw PreconditionError("tilde_gegenbauer_identity: x outside the sym1 support");
    const SeriesResult s = psi_series_auto(tilde_gegenbauer_sequence(lambda), lambda, z, x);
    detail::require_series(s, "tilde_gegenbauer_identity");
    return std::abs(s.value - principal_power(1.0 - z * x + 0.5 * (1.0 + lambda) * z * z, -lambda));
}

/// |sum_n (lambda)_n / n! C~_n^{lambda-1}(x) z^n - (1 - (lambda/2) z^2) / (1 - z x + lambda z^2 / 2)^lambda|
inline double family2_identity(double lambda, cplx z, double x)
{
    if (!(lambda > 0.5) || std::abs(lambda - 1.0) < degenerate_lambda_band)
        throw PreconditionError("family2_identity: need lambda > 1/2, lambda != 1");
    if (!(std::abs(x) <= std::sqrt(2.0 * lambda)))
        throw PreconditionError("family2_identity: x outside the sym2 support");
    const SeriesResult s = psi_series_auto(tilde_gegenbauer_sequence(lambda - 1.0), lambda, z, x);
    detail::require_series(s, "family2_identity");
    const cplx closed = (1.0 - 0.5 * lambda * z * z) * principal_power(1.0 - z * x + 0.5 * lambda * z * z, -lambda);
    return std::abs(s.value - closed);
}

enum class JacobiSign
{
    plus,
    minus
};

/// Relative residual between P_n(x) of the nonsym measure and
/// (2 lambda / s)^n p_n^{(a,b)}((s x -+ 1) / (2 lambda)), s = sqrt(2 lambda - 1),
/// (a, b) = (lambda - 1/2, lambda - 3/2) for plus and swapped for minus.
inline double jacobi_shift_check(double lambda, int n, double x, JacobiSign sign)
{
    if (n < 0 || n > 10)
        throw PreconditionError("jacobi_shift_check: n must lie in [0, 10]");
    const Family      fam = sign == JacobiSign::plus ? Family::NonSymPlus : Family::NonSymMinus;
    const MeasureSpec m   = build_measure(fam, lambda);
    if (x < m.support.lo || x > m.support.hi)
        throw PreconditionError("jacobi_shift_check: x outside the support");

    const JacobiSzegoSequence seq = recurrence_of(m);
    const double              lhs = eval_monic(seq, n, x).values.back();

    const double s = std::sqrt(2.0 * lambda - 1.0);
    const double y = sign == JacobiSign::plus ? (s * x - 1.0) / (2.0 * lambda) : (s * x + 1.0) / (2.0 * lambda);
    const JacobiSzegoSequence jac = sign == JacobiSign::plus ? monic_jacobi_sequence(lambda - 0.5, lambda - 1.5)
                                                             : monic_jacobi_sequence(lambda - 1.5, lambda - 0.5);
    const double rhs = std::pow(2.0 * lambda / s, n) * eval_monic(jac, n, y).values.back();
    return std::abs(lhs - rhs) / (std::abs(rhs) + std::sqrt(norm_squared(seq, n)));
}

/// |sum_n (lambda)_n / n! p_n^{(lambda-1/2, lambda-3/2)}(y) (2t)^n - (1 + t) / (1 + t^2 - 2 t y)^lambda|
inline double jacobi_2f1_gf_check(double lambda, double t, double y)
{
    if (!(lambda > 0.5) || !(std::abs(t) < 0.3) || !(std::abs(y) < 1.0))
        throw PreconditionError("jacobi_2f1_gf_check: need lambda > 1/2, |t| < 0.3, |y| < 1");
    const SeriesResult s = detail::scaled_series(monic_jacobi_sequence(lambda - 0.5, lambda - 1.5), lambda, 2.0, t, y);
    detail::require_series(s, "jacobi_2f1_gf_check");
    return std::abs(s.value.real() - (1.0 + t) * std::pow(1.0 + t * t - 2.0 * t * y, -lambda));
}

/// Factored closed form of psi for the nonsym families:
///   plus:   (lambda/s) (z + s/lambda) [1 - z (x - 1/s) + lambda^2 z^2 / s^2]^{-lambda}
///   minus: -(lambda/s) (z - s/lambda) [1 - z (x + 1/s) + lambda^2 z^2 / s^2]^{-lambda}
inline cplx gf3_closed(double lambda, cplx z, double x, JacobiSign sign)
{
    const double s   = std::sqrt(2.0 * lambda - 1.0);
    const double sg  = sign == JacobiSign::plus ? 1.0 : -1.0;
    const cplx   pre = sg * (lambda / s) * (z + sg * s / lambda);
    return pre * principal_power(1.0 - z * (x - sg / s) + lambda * lambda / (s * s) * z * z, -lambda);
}

/// |gf3_closed - psi| with psi from the genfun closed form; off the negative axis psi_closed is used,
/// on it the analytic form.
inline double gf3_equivalence(double lambda, cplx z, double x, JacobiSign sign = JacobiSign::plus)
{
    const GenFunClosedForm cf = closed_form(sign == JacobiSign::plus ? Family::NonSymPlus : Family::NonSymMinus, lambda);
    const cplx psi = on_negative_axis(z) && z != cplx(0.0) ? psi_analytic(cf, z, x) : psi_closed(cf, z, x);
    return std::abs(gf3_closed(lambda, z, x, sign) - psi);
}

/// Non-monic Jacobi P_n^{(a,b)} from the classical three-term recurrence (leading coefficient
/// (n + a + b + 1)_n / (2^n n!)).
inline double classical_jacobi(int n, double a, double b, double y)
{
    if (n == 0)
        return 1.0;
    double pm = 1.0, p = 0.5 * ((a + b + 2.0) * y + (a - b));
    for (int k = 2; k <= n; ++k)
    {
        const double s  = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (a * a - b * b);
        const double c3 = (s - 2.0) * (s - 1.0) * s;
        const double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        const double next = ((c2 + c3 * y) * p - c4 * pm) / c1;
        pm                = p;
        p                 = next;
    }
    return p;
}
} // namespace opgf

#endif // OPGF_IDENTITIES_HPP
