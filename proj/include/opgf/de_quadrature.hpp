#ifndef OPGF_DE_QUADRATURE_HPP
#define OPGF_DE_QUADRATURE_HPP

// Double-exponential (tanh-sinh) discretization of Jacobi-type weights
//
//     w(x) = (1 - y)^p (1 + y)^q,   y = (x - mid) / half,   p, q > -1,
//
// evaluated in log space so endpoint singularities with exponents close to -1 stay resolved.

#include "opgf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace opgf
{
struct WeightedRule
{
    std::vector< double > nodes;
    std::vector< double > weights; ///< include the Jacobian half * dy/dt * h
    double                total{};
};

namespace detail
{
inline double softplus(double v) { return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }
inline double log_cosh(double v)
{
    const double a = std::abs(v);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}
} // namespace detail

inline WeightedRule jacobi_weight_rule(double p, double q, double mid, double half, double step = 1.0 / 32.0)
{
    if (!(p > -1.0) || !(q > -1.0))
        throw ParameterError("jacobi_weight_rule: exponents must exceed -1");
    if (!(half > 0.0) || !(step > 0.0))
        throw InvalidInput("jacobi_weight_rule: half-width and step must be positive");

    constexpr double t_cap      = 10.0;
    constexpr double log_cutoff = 80.0;

    struct Term
    {
        double y, log_w;
    };
    auto term = [&](double t) {
        const double u     = 0.5 * std::numbers::pi * std::sinh(t);
        const double log1m = std::numbers::ln2 - detail::softplus(2.0 * u);
        const double log1p = std::numbers::ln2 - detail::softplus(-2.0 * u);
        const double log_jac =
            std::log(0.5 * std::numbers::pi) + detail::log_cosh(t) - 2.0 * detail::log_cosh(u);
        return Term{std::tanh(u), p * log1m + q * log1p + log_jac};
    };

    std::vector< Term > terms{term(0.0)};
    double              peak = terms.front().log_w;
    for (int k = 1; k * step <= t_cap; ++k)
    {
        const Term right = term(k * step);
        const Term left  = term(-k * step);
        peak             = std::max({peak, right.log_w, left.log_w});
        terms.push_back(right);
        terms.push_back(left);
        if (k * step > 1.0 && right.log_w < peak - log_cutoff && left.log_w < peak - log_cutoff)
            break;
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.y < b.y; });

    WeightedRule rule;
    rule.nodes.reserve(terms.size());
    rule.weights.reserve(terms.size());
    for (const Term& t : terms)
    {
        const double w = half * step * std::exp(t.log_w);
        if (w == 0.0)
            continue;
        rule.nodes.push_back(mid + half * t.y);
        rule.weights.push_back(w);
        rule.total += w;
    }
    return rule;
}
} // namespace opgf

#endif // OPGF_DE_QUADRATURE_HPP
