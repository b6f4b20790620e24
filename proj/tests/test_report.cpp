#include "opgf/opgf.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

using namespace opgf;

namespace
{
VerifyOptions options(Family f, double lambda, double a = 0.0, double b = 0.0)
{
    VerifyOptions o;
    o.family = f;
    o.lambda = lambda;
    o.a      = a;
    o.b      = b;
    return o;
}

std::string without_wall_time(std::string s)
{
    return std::regex_replace(s, std::regex("\"wall_time_ms\": [0-9]+"), "\"wall_time_ms\": 0");
}
} // namespace

TEST(CircleAngles, AvoidNegativeAxisAndAreConjugateClosed)
{
    const auto a = circle_angles(16);
    ASSERT_EQ(a.size(), 16u);
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        EXPECT_GT(a[k], -std::numbers::pi);
        EXPECT_LT(a[k], std::numbers::pi);
        EXPECT_NEAR(a[k], -a[a.size() - 1 - k], 1e-15);
    }
}

TEST(Verify, AllChecksPassForSym1)
{
    const auto rep = run_verify(options(Family::Sym1, 2.0));
    EXPECT_TRUE(rep.passed());
    std::vector< std::string > names;
    for (const auto& c : rep.checks)
    {
        EXPECT_EQ(c.passed, c.max_residual <= c.tolerance) << c.name;
        EXPECT_GT(c.points_tested, 0) << c.name;
        names.push_back(c.name);
    }
    for (const char* required : {"series_vs_closed", "moment_m0", "moment_m1", "moment_m2", "residual_f", "residual_u",
                                 "residual_moment_ode", "tilde_gegenbauer_identity", "gegenbauer_gf"})
        EXPECT_NE(std::find(names.begin(), names.end(), required), names.end()) << required;
}

TEST(Verify, FreeMeixnerIncludesUniqueness)
{
    const auto rep = run_verify(options(Family::FreeMeixner, 1.0, 0.5, 0.25));
    EXPECT_TRUE(rep.passed());
    EXPECT_TRUE(std::any_of(rep.checks.begin(), rep.checks.end(),
                            [](const CheckResult& c) { return c.name == "free_meixner_uniqueness" && c.passed; }));
    ASSERT_TRUE(rep.a.has_value());
    EXPECT_EQ(*rep.b, 0.25);
}

TEST(Verify, DegenerateFreeMeixnerPasses)
{
    EXPECT_TRUE(run_verify(options(Family::FreeMeixner, 1.0, 0.0, -1.0)).passed());
}

TEST(Verify, WholeSweepPasses)
{
    for (Family f : {Family::Sym1, Family::Sym2, Family::NonSymPlus, Family::NonSymMinus})
        for (double l : {0.6, 0.75, 1.5, 2.0, 2.5})
        {
            const auto rep = run_verify(options(f, l));
            for (const auto& c : rep.checks)
                EXPECT_TRUE(c.passed) << to_string(f) << " " << l << " " << c.name << " " << c.max_residual << " "
                                      << c.note;
        }
}

TEST(Verify, ParameterValidation)
{
    EXPECT_THROW(run_verify(options(Family::Sym1, -1.0)), ParameterError);
    EXPECT_THROW(run_verify(options(Family::Sym2, 1.0)), RedirectError);
    auto o = options(Family::Sym1, 2.0);
    o.zmax = 5.0;
    EXPECT_THROW(run_verify(o), PreconditionError);
    o.zmax = 0.1;
    o.grid = 3;
    EXPECT_THROW(run_verify(o), PreconditionError);
}

TEST(Verify, FailingToleranceIsReportedNotThrown)
{
    auto o = options(Family::Sym1, 2.0);
    o.tol  = 1e-30;
    const auto rep = run_verify(o);
    EXPECT_FALSE(rep.passed());
    const auto it = std::find_if(rep.checks.begin(), rep.checks.end(),
                                 [](const CheckResult& c) { return c.name == "series_vs_closed"; });
    ASSERT_NE(it, rep.checks.end());
    EXPECT_FALSE(it->passed);
}

TEST(Verify, DeterministicAcrossThreadCounts)
{
    auto o1 = options(Family::NonSymMinus, 1.5);
    auto o4 = o1;
    o4.threads = 4;
    const auto a = without_wall_time(json_text(to_json(run_verify(o1))));
    const auto b = without_wall_time(json_text(to_json(run_verify(o4))));
    EXPECT_EQ(a, b);
}

TEST(Json, SchemaAndPrecision)
{
    const auto j = to_json(run_verify(options(Family::Sym2, 2.0)));
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["family"], "sym2");
    EXPECT_EQ(j["tool_version"], version_string);
    EXPECT_TRUE(j["checks"].is_array());
    const std::string text = json_text(j);
    EXPECT_NE(text.find("\"zmax\": 0.10000000000000001"), std::string::npos);
    EXPECT_TRUE(nlohmann::json::parse(text).is_object());
}

TEST(Json, NonFiniteResidualBecomesNull)
{
    VerificationReport r;
    r.family = "sym1";
    r.checks.push_back({"x", 1, std::numeric_limits< double >::infinity(), 1.0, false, "boom"});
    const auto parsed = nlohmann::json::parse(json_text(to_json(r)));
    EXPECT_TRUE(parsed["checks"][0]["max_residual"].is_null());
    EXPECT_EQ(parsed["checks"][0]["note"], "boom");
    EXPECT_FALSE(parsed["passed"].get< bool >());
}

TEST(Classify, Branches)
{
    const auto two = classify_json(2.0);
    ASSERT_EQ(two["solutions"].size(), 5u);
    int valid = 0;
    for (const auto& s : two["solutions"])
        valid += s["valid"].get< bool >();
    EXPECT_EQ(valid, 4);
    EXPECT_NEAR(two["solutions"][0]["omega2"].get< double >(), 1.25, 1e-14);
    EXPECT_NEAR(two["solutions"][1]["omega2"].get< double >(), 1.0, 1e-14);
    EXPECT_NEAR(two["solutions"][2]["omega2"].get< double >(), 32.0 / 27.0, 1e-14);

    const auto one = classify_json(1.0);
    EXPECT_TRUE(one["solutions"].empty());
    EXPECT_NE(one["notes"][0].get< std::string >().find("degenerate case: free Meixner family"), std::string::npos);

    const auto small = classify_json(0.4);
    ASSERT_EQ(small["solutions"].size(), 2u);
    EXPECT_TRUE(small["solutions"][0]["valid"].get< bool >());
    EXPECT_FALSE(small["solutions"][1]["valid"].get< bool >());

    EXPECT_THROW(classify_json(0.0), ParameterError);
}

TEST(AtomicWrite, ReplacesFileAndLeavesNoTemporary)
{
    const auto dir  = std::filesystem::temp_directory_path() / "opgf_report_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "r.json";
    write_file_atomic(path, "first\n");
    write_file_atomic(path, "second\n");
    std::ifstream f(path);
    std::string   line;
    std::getline(f, line);
    EXPECT_EQ(line, "second");
    EXPECT_FALSE(std::filesystem::exists(dir / "r.json.tmp"));
    EXPECT_THROW(write_file_atomic(dir / "missing" / "r.json", "x"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
