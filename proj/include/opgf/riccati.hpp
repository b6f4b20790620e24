#ifndef OPGF_RICCATI_HPP
#define OPGF_RICCATI_HPP

// Riccati equation satisfied by f:
//
//     Q2(z) f'(z) = f(z)^2 - Q1(z) f(z) + R1(z)
//
//     Q2(z) = lambda (lambda - (lambda+1) omega2 / 2) z^2 - lambda alpha1 z - 1
//     Q1(z) = (lambda+1) omega2 z + alpha1
//     R1(z) = lambda (lambda+1) omega2 / 2 z^2 - 1
//
// and, for g = f - Q1/2 = E(z)/z, the polynomial identity
//
//     Q2(z) (z E'(z) - E(z)) - E(z)^2 = z^2 Q2~(z),   Q2~ = R1 - Q1^2/4 - (lambda+1) omega2 Q2 / 2.

#include "opgf/errors.hpp"
#include "opgf/genfun.hpp"
#include "opgf/measures.hpp"
#include "opgf/polynomial.hpp"
#include "opgf/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace opgf
{
struct RiccatiCoefficients
{
    std::array< double, 3 > q2{};
    std::array< double, 2 > q1{};
    std::array< double, 3 > r1{};
    std::array< double, 3 > q2_tilde{};
    double                  lambda{};
    double                  alpha1{};
    double                  omega2{};

    [[nodiscard]] Poly q2_poly() const { return {q2[0], q2[1], q2[2]}; }
    [[nodiscard]] Poly q1_poly() const { return {q1[0], q1[1]}; }
    [[nodiscard]] Poly r1_poly() const { return {r1[0], r1[1], r1[2]}; }
    [[nodiscard]] Poly q2_tilde_poly() const { return {q2_tilde[0], q2_tilde[1], q2_tilde[2]}; }
};

inline RiccatiCoefficients coefficients(double lambda, double alpha1, double omega2)
{
    if (!(lambda > 0.0))
        throw ParameterError("lambda must be > 0");
    RiccatiCoefficients c;
    c.lambda = lambda;
    c.alpha1 = alpha1;
    c.omega2 = omega2;
    const double k = (lambda + 1.0) * omega2;
    c.q2           = {-1.0, -lambda * alpha1, lambda * (lambda - 0.5 * k)};
    c.q1           = {alpha1, k};
    c.r1           = {-1.0, 0.0, 0.5 * lambda * k};

    const Poly q1 = c.q1_poly();
    const Poly t  = poly_sub(poly_sub(c.r1_poly(), poly_scale(poly_mul(q1, q1), 0.25)), poly_scale(c.q2_poly(), 0.5 * k));
    c.q2_tilde    = {poly_coeff(t, 0), poly_coeff(t, 1), poly_coeff(t, 2)};
    return c;
}

namespace detail
{
inline cplx riccati_residual(const RiccatiCoefficients& c, cplx z, cplx f, cplx fp)
{
    const cplx q2 = c.q2[0] + z * (c.q2[1] + z * c.q2[2]);
    const cplx q1 = c.q1[0] + z * c.q1[1];
    const cplx r1 = c.r1[0] + z * (c.r1[1] + z * c.r1[2]);
    return q2 * fp - f * f + q1 * f - r1;
}
} // namespace detail

/// Q2 f' - f^2 + Q1 f - R1 at z.
inline cplx residual_f(const GenFunClosedForm& cf, const RiccatiCoefficients& c, cplx z)
{
    detail::check_domain(cf, z, "residual_f");
    if (z == cplx(0.0))
        throw DomainError("residual_f: z must be nonzero");
    return detail::riccati_residual(c, z, cf.f(z), cf.f_prime(z));
}

/// u'/u - lambda (1 - f') / (f - lambda z).
inline cplx residual_u(const GenFunClosedForm& cf, cplx z)
{
    detail::check_domain(cf, z, "residual_u");
    if (z == cplx(0.0))
        throw DomainError("residual_u: z must be nonzero");
    const cplx f     = cf.f(z);
    const cplx denom = f - cf.lambda * z;
    if (std::abs(denom) == 0.0)
        throw NumericalError("residual_u: f(z) = lambda z, the relation is singular");
    const cplx u = cf.u(z);
    if (std::abs(u) == 0.0)
        throw NumericalError("residual_u: u(z) vanishes");
    return cf.u_prime(z) / u - cf.lambda * (1.0 - cf.f_prime(z)) / denom;
}

struct OdeResiduals
{
    double r_first{};  ///< (u (f - lambda z))' - (1 - lambda) u f'
    double r_second{}; ///< ([lambda z f - m2] u)' - lambda (1 - lambda) z u f'
};

inline constexpr double default_ode_step_fraction = 1e-5;

/// Both first-order ODEs for u, differentiated numerically (five-point central stencil).
/// step <= 0 selects 1e-5 * domain_radius.
inline OdeResiduals residual_moment_ode(const GenFunClosedForm& cf, const MeasureSpec& m, double z, double step = 0.0)
{
    const double h = step > 0.0 ? step : default_ode_step_fraction * cf.domain_radius;
    if (!(z - 2.0 * h > 0.0) || !(z + 2.0 * h < cf.domain_radius))
        throw PreconditionError("residual_moment_ode: z too close to the domain boundary for the stencil");

    const JacobiSzegoSequence seq    = recurrence_of(m);
    const double              lambda = cf.lambda, alpha1 = seq.alpha(1), omega2 = seq.omega(2);

    auto first = [&](double t) { return (cf.u(t) * (cf.f(t) - lambda * t)).real(); };
    auto second = [&](double t) {
        const double m2 = predicted_moments(lambda, alpha1, omega2, t).m2;
        return ((lambda * t * cf.f(t) - m2) * cf.u(t)).real();
    };
    auto diff = [h, z](auto&& F) {
        return (8.0 * (F(z + h) - F(z - h)) - (F(z + 2.0 * h) - F(z - 2.0 * h))) / (12.0 * h);
    };

    const double ufp = (cf.u(z) * cf.f_prime(z)).real();
    return {std::abs(diff(first) - (1.0 - lambda) * ufp), std::abs(diff(second) - lambda * (1.0 - lambda) * z * ufp)};
}

/// Q2 (z E' - E) - E^2 - z^2 Q2~ for a polynomial ansatz E (ascending coefficients).
inline Poly ansatz_residual(const RiccatiCoefficients& c, const Poly& e)
{
    const Poly ze_minus_e = poly_sub(poly_shift(poly_derivative(e), 1), e);
    const Poly lhs        = poly_sub(poly_mul(c.q2_poly(), ze_minus_e), poly_mul(e, e));
    return poly_sub(lhs, poly_shift(c.q2_tilde_poly(), 2));
}

struct ClassificationSolution
{
    double                  lambda{};
    bool                    symmetric{};
    double                  omega2{};
    double                  alpha1{};
    std::array< double, 3 > e_coeffs{}; ///< {a0, a1, a2}: E(z) = a0 z^2 + a1 z + a2
    std::string             branch_label;
    double                  max_residual{};
    std::array< double, 5 > equation_residuals{}; ///< coefficients of z^0 .. z^4
    bool                    valid{};
    double                  discriminant{std::numeric_limits< double >::quiet_NaN()};

    [[nodiscard]] RiccatiCoefficients riccati() const { return coefficients(lambda, alpha1, omega2); }

    /// f = (a0 z^2 + a1 z + a2) / z + Q1(z) / 2
    [[nodiscard]] cplx f(cplx z) const
    {
        const double k = 0.5 * (lambda + 1.0) * omega2;
        return (e_coeffs[0] * z * z + e_coeffs[1] * z + e_coeffs[2]) / z + k * z + 0.5 * alpha1;
    }
    [[nodiscard]] cplx f_prime(cplx z) const
    {
        return e_coeffs[0] - e_coeffs[2] / (z * z) + 0.5 * (lambda + 1.0) * omega2;
    }
};

inline cplx residual_f(const ClassificationSolution& s, cplx z)
{
    if (z == cplx(0.0))
        throw DomainError("residual_f: z must be nonzero");
    return detail::riccati_residual(s.riccati(), z, s.f(z), s.f_prime(z));
}

namespace detail
{
inline void validate_solver_lambda(double lambda, double lower)
{
    if (!std::isfinite(lambda))
        throw InvalidInput("lambda must be finite");
    if (std::abs(lambda - 1.0) < degenerate_lambda_band)
        throw RedirectError("lambda = 1 is the degenerate case: see free_meixner_uniqueness");
    if (!(lambda > lower))
        throw ParameterError(lower == 0.0 ? "lambda must be > 0" : "lambda must be > 1/2");
    if (std::abs(lambda - 0.5) < degenerate_lambda_band)
        throw ParameterError("lambda too close to 1/2: the system is ill-conditioned there");
}

/// z^k coefficient of the ansatz residual for E = a0 z^2 + a1 z + a2.
inline double ansatz_coeff(double lambda, double alpha1, double omega2, double a0, double a1, double a2, std::size_t k)
{
    return poly_coeff(ansatz_residual(coefficients(lambda, alpha1, omega2), {a2, a1, a0}), k);
}

/// Coefficients {c0, c1} of an affine function sampled at 0 and 1.
template < typename F >
std::array< double, 2 > affine_fit(F&& fn)
{
    const double v0 = fn(0.0);
    return {v0, fn(1.0) - v0};
}

/// Coefficients {c0, c1, c2} of a quadratic sampled at 0, 1, 2.
template < typename F >
std::array< double, 3 > quadratic_fit(F&& fn)
{
    const double v0 = fn(0.0), v1 = fn(1.0), v2 = fn(2.0);
    const double c2 = 0.5 * (v2 - 2.0 * v1 + v0);
    return {v0, v1 - v0 - c2, c2};
}

inline void fill_residuals(ClassificationSolution& s)
{
    const Poly r = ansatz_residual(s.riccati(), {s.e_coeffs[2], s.e_coeffs[1], s.e_coeffs[0]});
    s.max_residual = 0.0;
    for (std::size_t k = 0; k < 5; ++k)
    {
        s.equation_residuals[k] = poly_coeff(r, k);
        s.max_residual          = std::max(s.max_residual, std::abs(s.equation_residuals[k]));
    }
}

/// a2 from the z^0 equation (a2 - a2^2 = 0, nonzero root).
inline double solve_a2(double lambda)
{
    const auto c     = quadratic_fit([&](double a2) { return ansatz_coeff(lambda, 0.0, 1.0, 0.0, 0.0, a2, 0); });
    double     best  = 0.0;
    for (cplx r : quadratic_roots(c[0], c[1], c[2]))
        if (std::abs(r.real()) > std::abs(best))
            best = r.real();
    return best;
}
} // namespace detail

/// Symmetric ansatz E = a0 z^2 + a1 z + a2 with alpha1 = 0. The z^2 equation fixes a0 as an affine
/// function of omega2; the z^4 equation then becomes a quadratic in omega2.
inline std::vector< ClassificationSolution > solve_symmetric(double lambda)
{
    detail::validate_solver_lambda(lambda, 0.0);
    const double a2 = detail::solve_a2(lambda);
    // z^1: -lambda alpha1 a2 ... - 2 a1 a2 = 0, linear in a1
    const auto   a1_eq = detail::affine_fit([&](double a1) { return detail::ansatz_coeff(lambda, 0.0, 1.0, 0.0, a1, a2, 1); });
    const double a1    = -a1_eq[0] / a1_eq[1];

    auto a0_of = [&](double w) {
        const auto eq = detail::affine_fit([&](double a0) { return detail::ansatz_coeff(lambda, 0.0, w, a0, a1, a2, 2); });
        return -eq[0] / eq[1];
    };
    auto quartic_eq = [&](double w) { return detail::ansatz_coeff(lambda, 0.0, w, a0_of(w), a1, a2, 4); };
    auto c          = detail::quadratic_fit(quartic_eq);

    // The residual carries the content factor -(1 - lambda^2)/9; removing it leaves
    // -(l+1)(l+2) w^2 + (4l^2 + 6l - 1) w + (1 - 4l^2).
    const double content = -(1.0 - lambda * lambda) / 9.0;
    for (double& ci : c)
        ci /= content;
    const double disc = c[1] * c[1] - 4.0 * c[2] * c[0];

    auto roots = quadratic_roots(c[0], c[1], c[2]);
    if (roots.size() != 2 || roots[0].imag() != 0.0 || roots[1].imag() != 0.0)
        throw NumericalError("solve_symmetric: omega2 quadratic has no real roots");
    double hi = std::max(roots[0].real(), roots[1].real());
    double lo = std::min(roots[0].real(), roots[1].real());

    std::vector< ClassificationSolution > out;
    for (int branch = 0; branch < 2; ++branch)
    {
        ClassificationSolution s;
        s.lambda       = lambda;
        s.symmetric    = true;
        s.alpha1       = 0.0;
        s.omega2       = branch == 0 ? hi : lo;
        s.e_coeffs     = {a0_of(s.omega2), a1, a2};
        s.branch_label = branch == 0 ? "sym1: omega2 = (2 lambda + 1)/(lambda + 2)"
                                     : "sym2: omega2 = (2 lambda - 1)/(lambda + 1)";
        s.discriminant = disc;
        s.valid        = s.omega2 > 0.0 && (branch == 0 || lambda > 0.5);
        detail::fill_residuals(s);
        out.push_back(s);
    }
    return out;
}

/// Deflation of 2 l^3 + 3 l^2 - 1 by (l + 1) twice: {first remainder, second remainder}, quotient 2 l - 1.
inline std::pair< std::array< double, 2 >, Poly > nonsymmetric_denominator_deflation()
{
    const Poly cubic{-1.0, 0.0, 3.0, 2.0};
    const auto [q1, r1] = poly_deflate(cubic, -1.0);
    const auto [q2, r2] = poly_deflate(q1, -1.0);
    return {{r1, r2}, q2};
}

/// Non-symmetric ansatz (alpha1 != 0). Returns the two admissible solutions (alpha1 > 0, alpha1 < 0)
/// followed by the rejected degenerate root omega2 = 0.
inline std::vector< ClassificationSolution > solve_nonsymmetric(double lambda)
{
    detail::validate_solver_lambda(lambda, 0.5);
    const double a2 = detail::solve_a2(lambda);

    // z^1: a1 is linear in alpha1; slope from the unit-alpha1 equation.
    const auto a1_eq = detail::affine_fit([&](double a1) { return detail::ansatz_coeff(lambda, 1.0, 1.0, 0.0, a1, a2, 1); });
    const double a1_per_alpha = -a1_eq[0] / a1_eq[1];

    // z^3 divided by alpha1: affine in a0.
    auto a0_of = [&](double w) {
        const auto eq = detail::affine_fit(
            [&](double a0) { return detail::ansatz_coeff(lambda, 1.0, w, a0, a1_per_alpha, a2, 3); });
        return -eq[0] / eq[1];
    };
    // z^2: affine in t = alpha1^2 for fixed omega2.
    auto alpha_sq_of = [&](double w) {
        const double a0 = a0_of(w);
        const auto   eq = detail::affine_fit([&](double t) {
            const double al = std::sqrt(t);
            return detail::ansatz_coeff(lambda, al, w, a0, a1_per_alpha * al, a2, 2);
        });
        return -eq[0] / eq[1];
    };
    // z^4: quadratic in omega2 with a root at 0.
    const auto c = detail::quadratic_fit([&](double w) { return detail::ansatz_coeff(lambda, 0.0, w, a0_of(w), 0.0, a2, 4); });
    const double omega_nonzero = -c[1] / c[2];

    std::vector< ClassificationSolution > out;
    const double                          t = alpha_sq_of(omega_nonzero);
    for (double sign : {1.0, -1.0})
    {
        ClassificationSolution s;
        s.lambda       = lambda;
        s.symmetric    = false;
        s.omega2       = omega_nonzero;
        s.alpha1       = sign * std::sqrt(t);
        s.e_coeffs     = {a0_of(omega_nonzero), a1_per_alpha * s.alpha1, a2};
        s.branch_label = sign > 0 ? "nonsym-plus: alpha1 > 0" : "nonsym-minus: alpha1 < 0";
        s.valid        = t > 0.0 && s.omega2 > 0.0;
        detail::fill_residuals(s);
        out.push_back(s);
    }

    ClassificationSolution rejected;
    rejected.lambda       = lambda;
    rejected.symmetric    = false;
    rejected.omega2       = 0.0;
    rejected.alpha1       = 0.0;
    rejected.e_coeffs     = {a0_of(0.0), 0.0, a2};
    rejected.branch_label = "degenerate root omega2 = 0 (rejected: alpha1^2 = " + format_g17(alpha_sq_of(0.0)) + ")";
    rejected.valid        = false;
    detail::fill_residuals(rejected);
    out.push_back(rejected);
    return out;
}

inline constexpr int min_bound_degree = 3;
inline constexpr int max_bound_degree = 6;

/// Degree-`degree` ansatz E with symbolic leading coefficient t: the z^{2 degree} coefficient of the
/// identity is a quadratic in t. Returns the largest |t| it admits, cascading down to degree 3.
inline double degree_bound_check(double lambda, double alpha1, double omega2, int degree)
{
    if (degree < min_bound_degree || degree > max_bound_degree)
        throw PreconditionError("degree_bound_check: degree must lie in [3, 6]");
    const RiccatiCoefficients c = coefficients(lambda, alpha1, omega2);

    // lower coefficients are arbitrary; the top equation must not depend on them
    Poly e(static_cast< std::size_t >(degree) + 1);
    for (std::size_t j = 0; j < e.size(); ++j)
        e[j] = j == 0 ? 1.0 : 0.3 + 0.17 * static_cast< double >(j);

    double forced = 0.0;
    for (int k = degree; k >= min_bound_degree; --k)
    {
        const auto top = static_cast< std::size_t >(2 * k);
        auto       eq  = detail::quadratic_fit([&](double t) {
            Poly trial = e;
            trial.resize(static_cast< std::size_t >(k) + 1);
            trial[static_cast< std::size_t >(k)] = t;
            return poly_coeff(ansatz_residual(c, trial), top);
        });
        if (eq[2] == 0.0)
            throw NumericalError("degree_bound_check: leading equation lost its quadratic term");
        for (cplx r : quadratic_roots(eq[0], eq[1], eq[2]))
            forced = std::max(forced, std::abs(r));
        e.resize(static_cast< std::size_t >(k)); // leading coefficient forced to zero
    }
    return forced;
}

struct SeriesSolution
{
    std::vector< double > c; ///< c[n-1] = c_n, n = 1..n_terms
    double                h0{};
    int                   n_terms{};
};

inline constexpr int max_uniqueness_terms = 30;

/// lambda = 1: g = h + 1/z with -(b z^2 + a z + 1) h' = h^2 - a^2/4 + (2/z)(h - a/2).
/// The z^{-1} equation forces h(0) = a/2; the z^{n-1} equation reads
/// (n + 2) c_n = -a n c_{n-1} - b (n - 2) c_{n-2} - sum_{i+j=n-1} c_i c_j.
inline SeriesSolution free_meixner_uniqueness(double a, double b, int n_terms)
{
    if (n_terms < 1 || n_terms > max_uniqueness_terms)
        throw PreconditionError("free_meixner_uniqueness: n_terms must lie in [1, 30]");
    if (b < -1.0)
        throw ParameterError("free-meixner requires b >= -1");

    SeriesSolution sol;
    sol.n_terms = n_terms;
    sol.h0      = a / 2.0;
    std::vector< double > c(static_cast< std::size_t >(n_terms) + 1, 0.0); // c[0] unused (= 0)
    for (int n = 1; n <= n_terms; ++n)
    {
        double rhs = -a * n * c[static_cast< std::size_t >(n - 1)];
        if (n >= 2)
            rhs -= b * (n - 2) * c[static_cast< std::size_t >(n - 2)];
        for (int i = 1; i <= n - 2; ++i)
            rhs -= c[static_cast< std::size_t >(i)] * c[static_cast< std::size_t >(n - 1 - i)];
        c[static_cast< std::size_t >(n)] = rhs / (n + 2.0);
    }
    sol.c.assign(c.begin() + 1, c.end());
    return sol;
}

inline constexpr double h_initial_tolerance = 1e-6;

/// lambda alpha1 / 2, checked against lim_{z -> 0} (g(z) - 1/z) extrapolated from z = 1e-5, 1e-6.
inline double h_lambda_initial(const GenFunClosedForm& cf, double alpha1, double omega2)
{
    const double lambda    = cf.lambda;
    const double predicted = lambda * alpha1 / 2.0;
    auto         h         = [&](double z) {
        return (cf.f(z) - 0.5 * ((lambda + 1.0) * omega2 * z + alpha1)).real() - 1.0 / z;
    };
    const double z1 = 1e-5, z2 = 1e-6;
    const double limit = (z1 * h(z2) - z2 * h(z1)) / (z1 - z2);
    if (std::abs(limit - predicted) > h_initial_tolerance)
        throw InconsistencyError("h_lambda_initial: closed form gives " + format_g17(limit) + ", expected " +
                                 format_g17(predicted));
    return predicted;
}
} // namespace opgf

#endif // OPGF_RICCATI_HPP
