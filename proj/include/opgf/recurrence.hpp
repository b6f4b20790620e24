#ifndef OPGF_RECURRENCE_HPP
#define OPGF_RECURRENCE_HPP

// Monic orthogonal polynomials given by their Jacobi-Szego parameters:
//
//     x P_n(x) = P_{n+1}(x) + alpha_n P_n(x) + omega_n P_{n-1}(x),  P_{-1} = 0, P_0 = 1, omega_0 = 1.

#include "opgf/errors.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opgf
{
/// Recurrence data of a monic orthogonal polynomial system, held as index -> value callables.
class JacobiSzegoSequence
{
public:
    using Coefficient = std::function< double(int) >;

    JacobiSzegoSequence(Coefficient alpha, Coefficient omega, bool standardized,
                        std::optional< int > max_index = std::nullopt)
        : alpha_(std::move(alpha)), omega_(std::move(omega)), standardized_(standardized), max_index_(max_index)
    {}

    /// Finite table; alpha[n], omega[n] for n = 0..size-1 (omega[0] is ignored, omega_0 = 1).
    static JacobiSzegoSequence tabulated(std::vector< double > alpha, std::vector< double > omega, bool standardized)
    {
        if (alpha.size() != omega.size() || alpha.empty())
            throw InvalidInput("tabulated recurrence needs equally sized, non-empty alpha/omega tables");
        const int last = static_cast< int >(alpha.size()) - 1;
        auto a = [t = std::move(alpha)](int n) { return t[static_cast< std::size_t >(n)]; };
        auto w = [t = std::move(omega)](int n) { return t[static_cast< std::size_t >(n)]; };
        return JacobiSzegoSequence(std::move(a), std::move(w), standardized, last);
    }

    [[nodiscard]] double alpha(int n) const
    {
        check_index(n);
        return alpha_(n);
    }

    [[nodiscard]] double omega(int n) const
    {
        if (n == 0)
            return 1.0;
        check_index(n);
        return omega_(n);
    }

    [[nodiscard]] bool standardized() const noexcept { return standardized_; }
    [[nodiscard]] std::optional< int > max_index() const noexcept { return max_index_; }

private:
    void check_index(int n) const
    {
        if (n < 0 || (max_index_ && n > *max_index_))
            throw PreconditionError("recurrence coefficient index " + std::to_string(n) + " outside the available range");
    }

    Coefficient             alpha_;
    Coefficient             omega_;
    bool                    standardized_;
    std::optional< int >    max_index_;
};

/// values[n] = P_n(x) for n = 0..max_degree.
struct PolynomialValueTable
{
    double                x{};
    int                   max_degree{};
    std::vector< double > values;
};

inline PolynomialValueTable eval_monic(const JacobiSzegoSequence& seq, int n_max, double x)
{
    if (!std::isfinite(x))
        throw InvalidInput("eval_monic: x must be finite");
    if (n_max < 0)
        throw PreconditionError("eval_monic: n_max must be >= 0");

    PolynomialValueTable table{x, n_max, std::vector< double >(static_cast< std::size_t >(n_max) + 1)};
    double               prev = 0.0;
    double               cur  = 1.0;
    table.values[0]           = cur;
    for (int n = 0; n < n_max; ++n)
    {
        const double next = (x - seq.alpha(n)) * cur - seq.omega(n) * prev;
        prev              = cur;
        cur               = next;
        table.values[static_cast< std::size_t >(n) + 1] = cur;
    }
    return table;
}

/// ||P_n||^2 = omega_1 ... omega_n for a probability measure.
inline double norm_squared(const JacobiSzegoSequence& seq, int n)
{
    if (n < 0)
        throw PreconditionError("norm_squared: n must be >= 0");
    double product = 1.0;
    for (int k = 1; k <= n; ++k)
        product *= seq.omega(k);
    return product;
}

/// Discrete probability measure. `order` is the Gauss order when the rule is Gaussian, 0 otherwise.
struct QuadratureRule
{
    std::vector< double > nodes;
    std::vector< double > weights;
    int                   order{};

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }

    template < typename F >
    [[nodiscard]] auto integrate(F&& f) const
    {
        using R = decltype(f(0.0));
        R sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

inline constexpr int stieltjes_max_degree = 40;

/// Discrete Stieltjes procedure: recurrence coefficients alpha_0..alpha_{n_max}, omega_0..omega_{n_max}
/// of the measure carried by `rule`.
inline JacobiSzegoSequence stieltjes_from_quadrature(const QuadratureRule& rule, int n_max)
{
    if (n_max < 0 || n_max > stieltjes_max_degree)
        throw PreconditionError("stieltjes_from_quadrature: n_max must lie in [0, " +
                                std::to_string(stieltjes_max_degree) + "]");
    if (rule.nodes.size() != rule.weights.size())
        throw InvalidInput("stieltjes_from_quadrature: node/weight size mismatch");
    if (rule.size() < static_cast< std::size_t >(2 * n_max + 1))
        throw PreconditionError("stieltjes_from_quadrature: rule has " + std::to_string(rule.size()) +
                                " nodes, need at least " + std::to_string(2 * n_max + 1));
    double total = 0.0;
    for (double w : rule.weights)
    {
        if (!(w > 0.0))
            throw PreconditionError("stieltjes_from_quadrature: weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw PreconditionError("stieltjes_from_quadrature: weights must sum to 1");

    const std::size_t     m = rule.size();
    std::vector< double > prev(m, 0.0), cur(m, 1.0), next(m);
    std::vector< double > alpha(static_cast< std::size_t >(n_max) + 1), omega(static_cast< std::size_t >(n_max) + 1);
    omega[0]         = 1.0;
    double norm_prev = 1.0;

    for (int n = 0; n <= n_max; ++n)
    {
        double norm = 0.0, first = 0.0;
        for (std::size_t i = 0; i < m; ++i)
        {
            const double wp2 = rule.weights[i] * cur[i] * cur[i];
            norm += wp2;
            first += wp2 * rule.nodes[i];
        }
        if (n > 0)
        {
            const double w = norm / norm_prev;
            if (!(w > 0.0) || !std::isfinite(w))
                throw NumericalBreakdown("stieltjes_from_quadrature: omega_" + std::to_string(n) +
                                             " is not positive",
                                         n);
            omega[static_cast< std::size_t >(n)] = w;
        }
        const double a = first / norm;
        alpha[static_cast< std::size_t >(n)] = a;
        const double w = omega[static_cast< std::size_t >(n)];
        for (std::size_t i = 0; i < m; ++i)
            next[i] = (rule.nodes[i] - a) * cur[i] - (n > 0 ? w : 0.0) * prev[i];
        std::swap(prev, cur);
        std::swap(cur, next);
        norm_prev = norm;
    }

    const bool standardized = std::abs(alpha[0]) < 1e-12 && (n_max < 1 || std::abs(omega[1] - 1.0) < 1e-12);
    return JacobiSzegoSequence::tabulated(std::move(alpha), std::move(omega), standardized);
}
} // namespace opgf

#endif // OPGF_RECURRENCE_HPP
