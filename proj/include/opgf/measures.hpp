#ifndef OPGF_MEASURES_HPP
#define OPGF_MEASURES_HPP

// Catalog of the standardized (mean 0, variance 1) probability measures whose monic orthogonal
// polynomials admit a generating function 1 / (u(z) (f(z) - x)^lambda):
//
//   Sym1         c (1 - x^2 / (2(1+lambda)))^(lambda - 1/2)   on |x| <= sqrt(2(1+lambda)),  lambda > 0
//   Sym2         c (1 - x^2 / (2 lambda))^(lambda - 3/2)       on |x| <= sqrt(2 lambda),     lambda > 1/2
//   NonSymPlus   c (1 - y)^(lambda - 1/2) (1 + y)^(lambda - 3/2),  y = (sqrt(2 lambda - 1) x - 1) / (2 lambda)
//   NonSymMinus  mirror image of NonSymPlus under x -> -x
//   FreeMeixner  lambda = 1, recurrence alpha_n = a, omega_n = 1 + b (n >= 2); no density is carried.

#include "opgf/de_quadrature.hpp"
#include "opgf/errors.hpp"
#include "opgf/recurrence.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace opgf
{
enum class Family
{
    Sym1,
    Sym2,
    NonSymPlus,
    NonSymMinus,
    FreeMeixner
};

inline std::string_view to_string(Family f)
{
    switch (f)
    {
    case Family::Sym1: return "sym1";
    case Family::Sym2: return "sym2";
    case Family::NonSymPlus: return "nonsym-plus";
    case Family::NonSymMinus: return "nonsym-minus";
    case Family::FreeMeixner: return "free-meixner";
    }
    return "unknown";
}

inline Family family_from_string(std::string_view name)
{
    for (Family f : {Family::Sym1, Family::Sym2, Family::NonSymPlus, Family::NonSymMinus, Family::FreeMeixner})
        if (to_string(f) == name)
            return f;
    throw InvalidInput("unknown family '" + std::string(name) +
                       "' (expected sym1|sym2|nonsym-plus|nonsym-minus|free-meixner)");
}

inline constexpr double degenerate_lambda_band = 1e-6;
inline constexpr double min_half_lambda        = 0.51; // guard band above lambda = 1/2

/// Throws ParameterError / RedirectError when lambda is not admissible for `family`.
inline void validate_lambda(Family family, double lambda)
{
    if (!std::isfinite(lambda))
        throw InvalidInput("lambda must be finite");
    if (family == Family::FreeMeixner)
    {
        if (std::abs(lambda - 1.0) > degenerate_lambda_band)
            throw ParameterError("free-meixner requires lambda = 1");
        return;
    }
    if (!(lambda > 0.0))
        throw ParameterError("lambda must be > 0");
    if (std::abs(lambda - 1.0) < degenerate_lambda_band)
        throw RedirectError("lambda = 1 is the degenerate case: use the free-meixner family");
    if (family == Family::Sym1)
        return;
    if (!(lambda > 0.5))
        throw ParameterError("lambda must be > 1/2 for " + std::string(to_string(family)));
    if (lambda < min_half_lambda)
        throw ParameterError("lambda must be >= 0.51 for " + std::string(to_string(family)) +
                             " (guard band above 1/2)");
}

struct Interval
{
    double lo{};
    double hi{};
};

/// (1 - y)^p (1 + y)^q with y = (x - mid) / half.
struct JacobiWeight
{
    double p{}, q{}, mid{}, half{};
};

struct MeasureSpec
{
    Family                        family{};
    double                        lambda{};
    double                        a{};
    double                        b{};
    Interval                      support;
    std::optional< JacobiWeight > weight; ///< absent for FreeMeixner
    double                        norm_const{1.0};
    bool                          atoms_possible{false};

    [[nodiscard]] bool has_density() const noexcept { return weight.has_value(); }

    /// Unnormalized log-density; -inf outside the support.
    [[nodiscard]] double log_density(double x) const
    {
        if (!weight)
            throw PreconditionError("no density is carried for the free-meixner family");
        const double y = (x - weight->mid) / weight->half;
        if (y <= -1.0 || y >= 1.0)
            return -std::numeric_limits< double >::infinity();
        return weight->p * std::log1p(-y) + weight->q * std::log1p(y);
    }

    [[nodiscard]] double density(double x) const { return norm_const * std::exp(log_density(x)); }
};

inline MeasureSpec build_measure(Family family, double lambda, double a = 0.0, double b = 0.0)
{
    validate_lambda(family, lambda);
    MeasureSpec m{family, lambda, 0.0, 0.0, {}, std::nullopt, 1.0, false};
    switch (family)
    {
    case Family::Sym1: {
        const double r = std::sqrt(2.0 * (1.0 + lambda));
        m.support      = {-r, r};
        m.weight       = JacobiWeight{lambda - 0.5, lambda - 0.5, 0.0, r};
        break;
    }
    case Family::Sym2: {
        const double r = std::sqrt(2.0 * lambda);
        m.support      = {-r, r};
        m.weight       = JacobiWeight{lambda - 1.5, lambda - 1.5, 0.0, r};
        break;
    }
    case Family::NonSymPlus:
    case Family::NonSymMinus: {
        const double s    = std::sqrt(2.0 * lambda - 1.0);
        const double sign = family == Family::NonSymPlus ? 1.0 : -1.0;
        if (sign > 0)
        {
            m.support = {(1.0 - 2.0 * lambda) / s, (1.0 + 2.0 * lambda) / s};
            m.weight  = JacobiWeight{lambda - 0.5, lambda - 1.5, 1.0 / s, 2.0 * lambda / s};
        }
        else
        {
            m.support = {-(1.0 + 2.0 * lambda) / s, (2.0 * lambda - 1.0) / s};
            m.weight  = JacobiWeight{lambda - 1.5, lambda - 0.5, -1.0 / s, 2.0 * lambda / s};
        }
        break;
    }
    case Family::FreeMeixner: {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw InvalidInput("free-meixner parameters a, b must be finite");
        if (b < -1.0)
            throw ParameterError("free-meixner requires b >= -1");
        m.lambda       = 1.0;
        m.a            = a;
        m.b            = b;
        const double r = 2.0 * std::sqrt(1.0 + b);
        m.support      = {a - r, a + r};
        // atoms can only sit at real zeros of 1 + a x + b x^2
        m.atoms_possible = b == 0.0 ? a != 0.0 : a * a - 4.0 * b >= 0.0;
        return m;
    }
    }
    const WeightedRule rule = jacobi_weight_rule(m.weight->p, m.weight->q, m.weight->mid, m.weight->half);
    m.norm_const            = 1.0 / rule.total;
    return m;
}

/// Closed-form Jacobi-Szego parameters of a catalog measure.
inline JacobiSzegoSequence recurrence_of(const MeasureSpec& m)
{
    const double lambda = m.lambda;
    switch (m.family)
    {
    case Family::Sym1:
        return JacobiSzegoSequence([](int) { return 0.0; },
                                   [lambda](int n) {
                                       if (n == 1)
                                           return 1.0;
                                       return (1.0 + lambda) * n * (n + 2.0 * lambda - 1.0) /
                                              (2.0 * (n + lambda) * (n + lambda - 1.0));
                                   },
                                   true);
    case Family::Sym2:
        return JacobiSzegoSequence([](int) { return 0.0; },
                                   [lambda](int n) {
                                       if (n == 1)
                                           return 1.0;
                                       return lambda * n * (n + 2.0 * lambda - 3.0) /
                                              (2.0 * (n + lambda - 1.0) * (n + lambda - 2.0));
                                   },
                                   true);
    case Family::NonSymPlus:
    case Family::NonSymMinus: {
        const double s    = std::sqrt(2.0 * lambda - 1.0);
        const double sign = m.family == Family::NonSymPlus ? 1.0 : -1.0;
        return JacobiSzegoSequence(
            [lambda, s, sign](int n) {
                return sign * n * (n + 2.0 * lambda - 1.0) / (s * (n + lambda - 1.0) * (n + lambda));
            },
            [lambda, s](int n) {
                if (n == 1)
                    return 1.0;
                const double d = n + lambda - 1.0;
                return lambda * lambda * n * (n + 2.0 * lambda - 2.0) / (s * s * d * d);
            },
            true);
    }
    case Family::FreeMeixner: {
        const double a = m.a, b = m.b;
        return JacobiSzegoSequence([a](int n) { return n == 0 ? 0.0 : a; },
                                   [b](int n) { return n <= 1 ? 1.0 : 1.0 + b; }, true);
    }
    }
    throw InvalidInput("recurrence_of: unknown family");
}

/// Golub-Welsch: nodes are the eigenvalues of the order x order Jacobi matrix, weights the squared
/// first eigenvector components.
inline QuadratureRule gauss_quadrature(const JacobiSzegoSequence& seq, int order)
{
    if (order < 1)
        throw PreconditionError("gauss_quadrature: order must be >= 1");
    Eigen::VectorXd diag(order), sub(std::max(order - 1, 0));
    for (int i = 0; i < order; ++i)
        diag(i) = seq.alpha(i);
    for (int i = 0; i + 1 < order; ++i)
    {
        const double w = seq.omega(i + 1);
        if (!(w >= 0.0))
            throw NumericalError("gauss_quadrature: omega_" + std::to_string(i + 1) + " is negative");
        sub(i) = std::sqrt(w);
    }

    Eigen::SelfAdjointEigenSolver< Eigen::MatrixXd > solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
    {
        const double scale = diag.cwiseAbs().maxCoeff() + (order > 1 ? 2.0 * sub.maxCoeff() : 0.0);
        throw NumericalError("gauss_quadrature: tridiagonal eigensolver failed (order " + std::to_string(order) +
                             ", matrix scale " + std::to_string(scale) + ")");
    }

    QuadratureRule rule{std::vector< double >(static_cast< std::size_t >(order)),
                        std::vector< double >(static_cast< std::size_t >(order)), order};
    for (int i = 0; i < order; ++i)
    {
        const double v0 = solver.eigenvectors()(0, i);
        rule.nodes[static_cast< std::size_t >(i)]   = solver.eigenvalues()(i);
        rule.weights[static_cast< std::size_t >(i)] = v0 * v0;
    }
    return rule;
}

inline QuadratureRule gauss_quadrature(const MeasureSpec& m, int order)
{
    return gauss_quadrature(recurrence_of(m), order);
}

/// k-th raw moment through an order-point Gauss rule; exact when k <= 2 order - 1.
inline double moment(const MeasureSpec& m, int k, int order)
{
    if (k < 0 || 2 * order - 1 < k)
        throw PreconditionError("moment: need 0 <= k <= 2 order - 1");
    const QuadratureRule rule = gauss_quadrature(m, order);
    return rule.integrate([k](double x) { return std::pow(x, k); });
}

/// Discretization of the density itself (not of its recurrence); weights sum to 1.
inline QuadratureRule density_rule(const MeasureSpec& m, double step = 1.0 / 32.0)
{
    if (!m.weight)
        throw PreconditionError("density_rule: no density is carried for the free-meixner family");
    WeightedRule raw = jacobi_weight_rule(m.weight->p, m.weight->q, m.weight->mid, m.weight->half, step);
    for (double& w : raw.weights)
        w /= raw.total;
    return QuadratureRule{std::move(raw.nodes), std::move(raw.weights), 0};
}

inline std::string format_g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// `node,weight` rows with 17 significant digits, preceded by a comment line and a header.
inline void write_quadrature_csv(std::ostream& out, const QuadratureRule& rule, const MeasureSpec& m)
{
    out << "# family=" << to_string(m.family) << " lambda=" << format_g17(m.lambda);
    if (m.family == Family::FreeMeixner)
        out << " a=" << format_g17(m.a) << " b=" << format_g17(m.b);
    out << " order=" << rule.order << '\n';
    out << "node,weight\n";
    for (std::size_t i = 0; i < rule.size(); ++i)
        out << format_g17(rule.nodes[i]) << ',' << format_g17(rule.weights[i]) << '\n';
}
} // namespace opgf

#endif // OPGF_MEASURES_HPP
