#include "opgf/opgf.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace opgf;

namespace
{
const std::vector< double > lambdas{0.6, 0.75, 1.5, 2.0, 2.5};

oracle::BetaWeight weight_of(Family f, double lambda)
{
    switch (f)
    {
    case Family::Sym1: return oracle::sym1_weight(lambda);
    case Family::Sym2: return oracle::sym2_weight(lambda);
    case Family::NonSymPlus: return oracle::nonsym_plus_weight(lambda);
    default: return oracle::nonsym_minus_weight(lambda);
    }
}

const std::vector< Family > density_families{Family::Sym1, Family::Sym2, Family::NonSymPlus, Family::NonSymMinus};
} // namespace

TEST(Family, Names)
{
    for (Family f : {Family::Sym1, Family::Sym2, Family::NonSymPlus, Family::NonSymMinus, Family::FreeMeixner})
        EXPECT_EQ(family_from_string(to_string(f)), f);
    EXPECT_THROW(family_from_string("sym3"), InvalidInput);
}

TEST(BuildMeasure, ParameterErrors)
{
    try
    {
        build_measure(Family::Sym1, -1.0);
        FAIL();
    }
    catch (const ParameterError& e)
    {
        EXPECT_NE(std::string(e.what()).find("lambda must be > 0"), std::string::npos);
    }
    EXPECT_THROW(build_measure(Family::Sym2, 0.5), ParameterError);
    EXPECT_THROW(build_measure(Family::NonSymPlus, 0.505), ParameterError);
    EXPECT_THROW(build_measure(Family::Sym1, 1.0), RedirectError);
    EXPECT_THROW(build_measure(Family::NonSymMinus, 1.0), RedirectError);
    EXPECT_THROW(build_measure(Family::FreeMeixner, 2.0), ParameterError);
    EXPECT_THROW(build_measure(Family::FreeMeixner, 1.0, 0.0, -1.5), ParameterError);
    EXPECT_NO_THROW(build_measure(Family::Sym1, 0.4));
}

TEST(BuildMeasure, Supports)
{
    const auto u = build_measure(Family::Sym1, 0.5);
    EXPECT_NEAR(u.support.lo, -std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(u.support.hi, std::sqrt(3.0), 1e-15);
    const auto s2 = build_measure(Family::Sym2, 1.5);
    EXPECT_NEAR(s2.support.hi, std::sqrt(3.0), 1e-15);
    const auto np = build_measure(Family::NonSymPlus, 2.0);
    EXPECT_NEAR(np.support.lo, -3.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(np.support.hi, 5.0 / std::sqrt(3.0), 1e-15);
    const auto nm = build_measure(Family::NonSymMinus, 2.0);
    EXPECT_NEAR(nm.support.lo, -5.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(nm.support.hi, 3.0 / std::sqrt(3.0), 1e-15);
}

TEST(BuildMeasure, UniformCases)
{
    for (auto [f, l] : {std::pair{Family::Sym1, 0.5}, std::pair{Family::Sym2, 1.5}})
    {
        const auto m = build_measure(f, l);
        EXPECT_NEAR(m.density(0.0), 1.0 / (2.0 * std::sqrt(3.0)), 1e-12);
        EXPECT_NEAR(m.density(1.5), 1.0 / (2.0 * std::sqrt(3.0)), 1e-12);
        EXPECT_EQ(m.density(1.8), 0.0);
    }
}

TEST(BuildMeasure, NormalizationMatchesBetaFunction)
{
    for (Family f : density_families)
        for (double l : lambdas)
        {
            const auto m = build_measure(f, l);
            // density = norm_const (1 - y)^p (1 + y)^q with y = (x - mid)/half, and (hi - x) = half (1 - y)
            const auto   w        = weight_of(f, l);
            const double expected = std::pow(m.weight->half, w.p + w.q) / oracle::beta_mass(w);
            EXPECT_NEAR(m.norm_const / expected, 1.0, 1e-10) << to_string(f) << " " << l;
        }
}

TEST(BuildMeasure, StandardizedMoments)
{
    for (Family f : density_families)
        for (double l : lambdas)
        {
            const auto rule = density_rule(build_measure(f, l));
            double     m0 = 0, m1 = 0, m2 = 0;
            for (std::size_t i = 0; i < rule.size(); ++i)
            {
                m0 += rule.weights[i];
                m1 += rule.weights[i] * rule.nodes[i];
                m2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
            }
            EXPECT_NEAR(m0, 1.0, 1e-10);
            EXPECT_NEAR(m1, 0.0, 1e-9);
            EXPECT_NEAR(m2, 1.0, 1e-9);
            // independent: Boost tanh-sinh on the weight as written from the formulas
            const auto w = weight_of(f, l);
            EXPECT_NEAR(oracle::beta_moment(w, 1), 0.0, 1e-9) << to_string(f) << " " << l;
            EXPECT_NEAR(oracle::beta_moment(w, 2), 1.0, 1e-9) << to_string(f) << " " << l;
        }
}

TEST(BuildMeasure, Reflection)
{
    for (double l : lambdas)
    {
        const auto plus  = build_measure(Family::NonSymPlus, l);
        const auto minus = build_measure(Family::NonSymMinus, l);
        for (int k = 1; k < 20; ++k)
        {
            const double x = plus.support.lo + (plus.support.hi - plus.support.lo) * k / 20.0;
            EXPECT_NEAR(minus.density(-x), plus.density(x), 1e-12 * (1.0 + plus.density(x)));
        }
    }
}

TEST(BuildMeasure, EndpointBehaviour)
{
    const auto a = build_measure(Family::NonSymPlus, 1.2); // exponents 0.7 at hi, -0.3 at lo
    EXPECT_LT(a.density(a.support.hi - 1e-9), 1e-5);
    EXPECT_GT(a.density(a.support.lo + 1e-9), 1e2);
    EXPECT_THROW(build_measure(Family::FreeMeixner, 1.0).log_density(0.0), PreconditionError);
    EXPECT_FALSE(build_measure(Family::FreeMeixner, 1.0).has_density());
}

TEST(BuildMeasure, FreeMeixnerAtomFlag)
{
    EXPECT_FALSE(build_measure(Family::FreeMeixner, 1.0, 0.0, 0.0).atoms_possible);
    EXPECT_FALSE(build_measure(Family::FreeMeixner, 1.0, 0.5, 0.25).atoms_possible);
    EXPECT_TRUE(build_measure(Family::FreeMeixner, 1.0, -1.0, -0.5).atoms_possible);
}

TEST(Recurrence, CatalogExamples)
{
    EXPECT_DOUBLE_EQ(recurrence_of(build_measure(Family::Sym1, 2.0)).omega(2), 1.25);
    EXPECT_DOUBLE_EQ(recurrence_of(build_measure(Family::Sym2, 2.0)).omega(2), 1.0);
    const auto fm = recurrence_of(build_measure(Family::FreeMeixner, 1.0, 0.3, 0.2));
    EXPECT_DOUBLE_EQ(fm.alpha(3), 0.3);
    EXPECT_DOUBLE_EQ(fm.omega(3), 1.2);
    for (Family f : density_families)
    {
        const auto seq = recurrence_of(build_measure(f, 1.7));
        EXPECT_EQ(seq.alpha(0), 0.0);
        EXPECT_EQ(seq.omega(1), 1.0);
    }
}

TEST(Recurrence, Sym1IsScaledGegenbauer)
{
    // monic P_n(x) = r^n n! / (2^n (lambda)_n) C_n^lambda(x / r)
    for (double l : {0.4, 0.75, 2.0, 3.5})
    {
        const auto   seq = recurrence_of(build_measure(Family::Sym1, l));
        const double r   = std::sqrt(2.0 * (1.0 + l));
        for (double x : {-1.7, -0.3, 0.0, 0.9, 1.4})
        {
            const auto P = eval_monic(seq, 10, x).values;
            for (int n = 0; n <= 10; ++n)
            {
                const double ref = std::pow(r, n) * std::tgamma(n + 1.0) / (std::ldexp(1.0, n) * pochhammer(l, n)) *
                                   boost::math::gegenbauer(static_cast< unsigned >(n), l, x / r);
                EXPECT_NEAR(P[n], ref, 1e-11 * (1.0 + std::abs(ref))) << "lambda=" << l << " n=" << n;
            }
        }
    }
}

TEST(Recurrence, MomentsMatchIndependentIntegration)
{
    for (Family f : density_families)
        for (double l : {0.6, 1.5, 2.5})
        {
            const auto m = build_measure(f, l);
            const auto w = weight_of(f, l);
            for (int k = 0; k <= 12; ++k)
                EXPECT_NEAR(moment(m, k, 8), oracle::beta_moment(w, k), 1e-9 * (1.0 + std::abs(oracle::beta_moment(w, k))))
                    << to_string(f) << " " << l << " k=" << k;
        }
}

TEST(Recurrence, FreeMeixnerAgainstAbsolutelyContinuousPlusAtoms)
{
    for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.25}, std::pair{-1.0, -0.5}, std::pair{1.0, -0.5},
                        std::pair{0.3, -0.9}, std::pair{2.0, 0.1}, std::pair{0.0, 2.0}})
    {
        const auto law = oracle::free_meixner_law(a, b);
        const auto m   = build_measure(Family::FreeMeixner, 1.0, a, b);
        for (int k = 0; k <= 12; ++k)
        {
            const double ref = law.moment(k);
            EXPECT_NEAR(moment(m, k, 8), ref, 1e-9 * (1.0 + std::abs(ref))) << "a=" << a << " b=" << b << " k=" << k;
        }
    }
}

TEST(Gauss, Examples)
{
    const auto r = gauss_quadrature(build_measure(Family::Sym1, 0.5), 2);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r.nodes[0], -1.0, 1e-14);
    EXPECT_NEAR(r.nodes[1], 1.0, 1e-14);
    EXPECT_NEAR(r.weights[0], 0.5, 1e-14);
    EXPECT_NEAR(r.weights[1], 0.5, 1e-14);
    for (Family f : density_families)
    {
        const auto one = gauss_quadrature(build_measure(f, 2.0), 1);
        ASSERT_EQ(one.size(), 1u);
        EXPECT_EQ(one.nodes[0], 0.0);
        EXPECT_EQ(one.weights[0], 1.0);
    }
    const auto np = gauss_quadrature(build_measure(Family::NonSymPlus, 2.0), 12);
    EXPECT_NEAR(np.integrate([](double x) { return x * x; }), 1.0, 1e-10);
    EXPECT_THROW(gauss_quadrature(build_measure(Family::Sym1, 2.0), 0), PreconditionError);
}

TEST(Gauss, WeightsSumToOneAndNodesInSupport)
{
    for (Family f : density_families)
        for (double l : lambdas)
        {
            const auto m = build_measure(f, l);
            const auto r = gauss_quadrature(m, 40);
            double     s = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i)
            {
                EXPECT_GT(r.weights[i], 0.0);
                EXPECT_GE(r.nodes[i], m.support.lo - 1e-12);
                EXPECT_LE(r.nodes[i], m.support.hi + 1e-12);
                s += r.weights[i];
            }
            EXPECT_NEAR(s, 1.0, 1e-12);
        }
}

TEST(Gauss, ExactnessAgainstHighResolutionIntegration)
{
    for (Family f : density_families)
    {
        const auto m    = build_measure(f, 1.3);
        const auto rule = gauss_quadrature(m, 4);
        const auto w    = weight_of(f, 1.3);
        for (int k = 0; k <= 6; ++k)
        {
            const double ref = oracle::beta_moment(w, k);
            EXPECT_NEAR(rule.integrate([&](double x) { return std::pow(x, k); }), ref, 1e-10 * (1.0 + std::abs(ref)));
        }
    }
}

TEST(Moment, StandardizationAndPrecondition)
{
    for (Family f : density_families)
    {
        const auto m = build_measure(f, 2.5);
        EXPECT_NEAR(moment(m, 0, 3), 1.0, 1e-14);
        EXPECT_NEAR(moment(m, 1, 3), 0.0, 1e-12);
        EXPECT_NEAR(moment(m, 2, 3), 1.0, 1e-10);
        EXPECT_THROW(moment(m, 6, 3), PreconditionError);
    }
}

TEST(Csv, FormatAndPrecision)
{
    const auto         m = build_measure(Family::Sym1, 0.5);
    std::ostringstream os;
    write_quadrature_csv(os, gauss_quadrature(m, 2), m);
    std::istringstream is(os.str());
    std::string        line;
    std::getline(is, line);
    EXPECT_EQ(line, "# family=sym1 lambda=0.5 order=2");
    std::getline(is, line);
    EXPECT_EQ(line, "node,weight");
    int rows = 0;
    while (std::getline(is, line))
    {
        const auto comma = line.find(',');
        ASSERT_NE(comma, std::string::npos);
        EXPECT_NEAR(std::abs(std::stod(line.substr(0, comma))), 1.0, 1e-14);
        EXPECT_NEAR(std::stod(line.substr(comma + 1)), 0.5, 1e-14);
        ++rows;
    }
    EXPECT_EQ(rows, 2);
    EXPECT_EQ(format_g17(0.1), "0.10000000000000001");
}
