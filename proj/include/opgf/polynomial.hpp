#ifndef OPGF_POLYNOMIAL_HPP
#define OPGF_POLYNOMIAL_HPP

#include <algorithm>
#include <complex>
#include <vector>

namespace opgf
{
/// Dense real polynomial, ascending coefficients.
using Poly = std::vector< double >;

inline Poly poly_add(const Poly& p, const Poly& q)
{
    Poly r(std::max(p.size(), q.size()), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        r[i] += p[i];
    for (std::size_t i = 0; i < q.size(); ++i)
        r[i] += q[i];
    return r;
}

inline Poly poly_scale(Poly p, double s)
{
    for (double& c : p)
        c *= s;
    return p;
}

inline Poly poly_sub(const Poly& p, const Poly& q) { return poly_add(p, poly_scale(q, -1.0)); }

inline Poly poly_mul(const Poly& p, const Poly& q)
{
    if (p.empty() || q.empty())
        return {};
    Poly r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            r[i + j] += p[i] * q[j];
    return r;
}

inline Poly poly_derivative(const Poly& p)
{
    if (p.size() <= 1)
        return {0.0};
    Poly r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i)
        r[i - 1] = static_cast< double >(i) * p[i];
    return r;
}

/// z^k p(z)
inline Poly poly_shift(const Poly& p, std::size_t k)
{
    Poly r(k, 0.0);
    r.insert(r.end(), p.begin(), p.end());
    return r;
}

template < typename T >
T poly_eval(const Poly& p, T z)
{
    T acc{};
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

inline double poly_coeff(const Poly& p, std::size_t k) { return k < p.size() ? p[k] : 0.0; }

/// Synthetic division by (z - root); returns {quotient, remainder}.
inline std::pair< Poly, double > poly_deflate(const Poly& p, double root)
{
    if (p.empty())
        return {{}, 0.0};
    const std::size_t n = p.size() - 1;
    Poly              q(n, 0.0);
    double            carry = p[n];
    for (std::size_t k = n; k-- > 0;)
    {
        q[k]  = carry;
        carry = p[k] + carry * root;
    }
    return {q, carry};
}
} // namespace opgf

#endif // OPGF_POLYNOMIAL_HPP
