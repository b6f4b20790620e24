#include <json.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace
{
namespace fs = std::filesystem;

struct CliRun
{
    int         code;
    std::string out;
    std::string err;
};

fs::path scratch()
{
    const fs::path dir = fs::temp_directory_path() / ("opgf_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream     f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

CliRun run(const std::string& args)
{
    const fs::path dir = scratch();
    const std::string cmd = std::string("\"") + OPGF_CLI_PATH + "\" " + args + " > \"" + (dir / "stdout").string() +
                            "\" 2> \"" + (dir / "stderr").string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "stdout"), slurp(dir / "stderr")};
}
} // namespace

TEST(Cli, VerifySym1Passes)
{
    const fs::path out = scratch() / "sym1.json";
    const CliRun      r   = run("verify --family sym1 --lambda 2 --zmax 0.1 --grid 16 --tol 1e-9 --out \"" + out.string() + "\"");
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_TRUE(j["passed"].get< bool >());
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["family"], "sym1");
}

TEST(Cli, VerifyFreeMeixner)
{
    const CliRun r = run("verify --family free-meixner --a 0.5 --b 0.25 --zmax 0.1 --grid 16");
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    bool       found = false;
    for (const auto& c : j["checks"])
        found = found || (c["name"] == "free_meixner_uniqueness" && c["passed"].get< bool >());
    EXPECT_TRUE(found);
}

TEST(Cli, InvalidParametersExitTwo)
{
    const CliRun r = run("verify --family sym1 --lambda -1 --zmax 0.1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("lambda must be > 0"), std::string::npos);
    EXPECT_EQ(run("verify --family sym3 --lambda 2").code, 2);
    EXPECT_EQ(run("verify --family sym1 --lambda 2 --zmax 3").code, 2);
    EXPECT_EQ(run("verify --family sym1 --lambda 1").code, 2);
    EXPECT_EQ(run("verify --family sym1 --lambda abc").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, CheckFailureExitOneWithReport)
{
    const fs::path out = scratch() / "fail.json";
    const CliRun r = run("verify --family sym2 --lambda 2 --tol 1e-40 --out \"" + out.string() + "\"");
    EXPECT_EQ(r.code, 1);
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_FALSE(j["passed"].get< bool >());
}

TEST(Cli, ReportsAreDeterministic)
{
    const fs::path dir = scratch();
    run("verify --family nonsym-plus --lambda 1.5 --out \"" + (dir / "a.json").string() + "\"");
    run("verify --family nonsym-plus --lambda 1.5 --out \"" + (dir / "b.json").string() + "\"");
    auto a = nlohmann::json::parse(slurp(dir / "a.json"));
    auto b = nlohmann::json::parse(slurp(dir / "b.json"));
    a.erase("wall_time_ms");
    b.erase("wall_time_ms");
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, Classify)
{
    const CliRun two = run("classify --lambda 2");
    EXPECT_EQ(two.code, 0);
    const auto j = nlohmann::json::parse(two.out);
    EXPECT_EQ(j["solutions"].size(), 5u);
    const CliRun one = run("classify --lambda 1");
    EXPECT_EQ(one.code, 0);
    EXPECT_NE(one.out.find("degenerate case: free Meixner family"), std::string::npos);
    const CliRun small = run("classify --lambda 0.4");
    const auto js = nlohmann::json::parse(small.out);
    EXPECT_TRUE(js["solutions"][0]["valid"].get< bool >());
    EXPECT_FALSE(js["solutions"][1]["valid"].get< bool >());
    EXPECT_EQ(run("classify --lambda -2").code, 2);
}

TEST(Cli, QuadratureCsv)
{
    const CliRun r = run("quadrature --family sym1 --lambda 0.5 --order 2");
    EXPECT_EQ(r.code, 0);
    std::istringstream is(r.out);
    std::string        line;
    std::getline(is, line);
    EXPECT_EQ(line, "# family=sym1 lambda=0.5 order=2");
    std::getline(is, line);
    EXPECT_EQ(line, "node,weight");
    std::vector< std::pair< double, double > > rows;
    while (std::getline(is, line))
        rows.emplace_back(std::stod(line.substr(0, line.find(','))), std::stod(line.substr(line.find(',') + 1)));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0].first, -1.0, 1e-14);
    EXPECT_NEAR(rows[1].first, 1.0, 1e-14);
    EXPECT_NEAR(rows[0].second, 0.5, 1e-14);

    const CliRun one = run("quadrature --family sym2 --lambda 2 --order 1");
    EXPECT_NE(one.out.find("\n0,1\n"), std::string::npos);

    const fs::path out = scratch() / "np.csv";
    EXPECT_EQ(run("quadrature --family nonsym-plus --lambda 2 --order 20 --out \"" + out.string() + "\"").code, 0);
    std::istringstream f(slurp(out));
    std::getline(f, line);
    std::getline(f, line);
    int    n   = 0;
    double sum = 0.0;
    while (std::getline(f, line))
    {
        sum += std::stod(line.substr(line.find(',') + 1));
        ++n;
    }
    EXPECT_EQ(n, 20);
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Cli, IoFailureExitThree)
{
    EXPECT_EQ(run("quadrature --family sym1 --lambda 2 --order 3 --out /nonexistent-dir/q.csv").code, 3);
    EXPECT_EQ(run("verify --family sym1 --lambda 2 --out /nonexistent-dir/r.json").code, 3);
}

TEST(Cli, ThreadCapFromEnvironment)
{
    const fs::path dir = scratch();
    run("verify --family sym1 --lambda 2.5 --out \"" + (dir / "t1.json").string() + "\"");
    ::setenv("OPGF_THREADS", "4", 1);
    run("verify --family sym1 --lambda 2.5 --out \"" + (dir / "t4.json").string() + "\"");
    ::unsetenv("OPGF_THREADS");
    auto a = nlohmann::json::parse(slurp(dir / "t1.json"));
    auto b = nlohmann::json::parse(slurp(dir / "t4.json"));
    a.erase("wall_time_ms");
    b.erase("wall_time_ms");
    EXPECT_EQ(a.dump(), b.dump());
}
