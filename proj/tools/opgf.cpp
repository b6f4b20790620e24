#include "opgf/opgf.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace
{
enum ExitCode : int
{
    exit_ok           = 0,
    exit_check_failed = 1,
    exit_bad_params   = 2,
    exit_io           = 3,
};

struct IoFailure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

void emit(const std::string& out_path, const std::string& text)
{
    if (out_path.empty() || out_path == "-")
    {
        std::cout << text;
        std::cout.flush();
        if (!std::cout)
            throw IoFailure("write to stdout failed");
        return;
    }
    try
    {
        opgf::write_file_atomic(out_path, text);
    }
    catch (const std::exception& e)
    {
        throw IoFailure(e.what());
    }
}
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Orthogonal polynomial generating-function verifier"};
    app.set_version_flag("--version", std::string(opgf::version_string));
    app.require_subcommand(1);

    std::string family = "sym1", out;
    double      lambda = 1.0, a = 0.0, b = 0.0, zmax = 0.1, tol = 1e-9;
    int         grid = 16, order = 10;

    auto* verify = app.add_subcommand("verify", "run the verification campaign for one family");
    verify->add_option("--family", family, "sym1|sym2|nonsym-plus|nonsym-minus|free-meixner")->required();
    verify->add_option("--lambda", lambda, "family parameter");
    verify->add_option("--a", a, "free Meixner a");
    verify->add_option("--b", b, "free Meixner b (>= -1)");
    verify->add_option("--zmax", zmax, "radius of the z grid")->capture_default_str();
    verify->add_option("--grid", grid, "number of angles on each circle")->capture_default_str();
    verify->add_option("--tol", tol, "tolerance for series and moment checks")->capture_default_str();
    verify->add_option("--out", out, "JSON report path (default stdout)");

    auto* classify = app.add_subcommand("classify", "list the classification branches at lambda");
    classify->add_option("--lambda", lambda, "family parameter")->required();
    classify->add_option("--out", out, "JSON report path (default stdout)");

    auto* quad = app.add_subcommand("quadrature", "export a Gauss rule as CSV");
    quad->add_option("--family", family, "sym1|sym2|nonsym-plus|nonsym-minus|free-meixner")->required();
    quad->add_option("--lambda", lambda, "family parameter");
    quad->add_option("--a", a, "free Meixner a");
    quad->add_option("--b", b, "free Meixner b (>= -1)");
    quad->add_option("--order", order, "number of nodes")->capture_default_str();
    quad->add_option("--out", out, "CSV path (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_bad_params;
    }

    try
    {
        if (*verify)
        {
            opgf::VerifyOptions o;
            o.family  = opgf::family_from_string(family);
            o.lambda  = lambda;
            o.a       = a;
            o.b       = b;
            o.zmax    = zmax;
            o.grid    = grid;
            o.tol     = tol;
            o.threads = opgf::threads_from_env();
            opgf::validate_verify(o);
            const opgf::VerificationReport rep = opgf::run_verify(o);
            emit(out, opgf::json_text(opgf::to_json(rep)));
            for (const auto& c : rep.checks)
                if (!c.passed)
                    std::cerr << "FAILED " << c.name << ": max_residual " << opgf::format_g17(c.max_residual)
                              << " > " << opgf::format_g17(c.tolerance) << (c.note.empty() ? "" : " (" + c.note + ")")
                              << '\n';
            return rep.passed() ? exit_ok : exit_check_failed;
        }
        if (*classify)
        {
            emit(out, opgf::json_text(opgf::classify_json(lambda)));
            return exit_ok;
        }
        if (*quad)
        {
            const opgf::MeasureSpec m = opgf::build_measure(opgf::family_from_string(family),
                                                            family == "free-meixner" ? 1.0 : lambda, a, b);
            const opgf::QuadratureRule rule = opgf::gauss_quadrature(m, order);
            std::ostringstream         os;
            opgf::write_quadrature_csv(os, rule, m);
            emit(out, os.str());
            return exit_ok;
        }
    }
    catch (const IoFailure& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    catch (const opgf::ParameterError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_params;
    }
    catch (const opgf::PreconditionError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_params;
    }
    catch (const opgf::InvalidInput& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_params;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_check_failed;
    }
    return exit_ok;
}
