#ifndef OPGF_REPORT_HPP
#define OPGF_REPORT_HPP

// Verification campaigns over one family and their machine-readable reports.

#include "opgf/errors.hpp"
#include "opgf/genfun.hpp"
#include "opgf/identities.hpp"
#include "opgf/measures.hpp"
#include "opgf/recurrence.hpp"
#include "opgf/riccati.hpp"
#include "opgf/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace opgf
{
struct CheckResult
{
    std::string name;
    long        points_tested{};
    double      max_residual{};
    double      tolerance{};
    bool        passed{};
    std::string note; ///< first error message, if any point threw
};

struct VerificationReport
{
    std::string               tool_version{version_string};
    std::string               family;
    double                    lambda{};
    std::optional< double >   a, b;
    double                    zmax{};
    int                       grid{};
    double                    tol{};
    std::vector< CheckResult > checks;
    long long                 wall_time_ms{};

    [[nodiscard]] bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

struct VerifyOptions
{
    Family family{Family::Sym1};
    double lambda{1.0};
    double a{0.0};
    double b{0.0};
    double zmax{0.1};
    int    grid{16};
    double tol{1e-9};
    int    threads{1};
};

/// Thread cap from OPGF_THREADS (default 1).
inline int threads_from_env()
{
    if (const char* s = std::getenv("OPGF_THREADS"))
    {
        const int n = std::atoi(s);
        if (n > 0)
            return n;
    }
    return 1;
}

/// Angles (2k + 1) pi / grid - pi, k = 0..grid-1: evenly spaced, closed under conjugation, never +-pi.
inline std::vector< double > circle_angles(int grid)
{
    std::vector< double > out(static_cast< std::size_t >(grid));
    for (int k = 0; k < grid; ++k)
        out[static_cast< std::size_t >(k)] = -std::numbers::pi + (2.0 * k + 1.0) * std::numbers::pi / grid;
    return out;
}

inline std::vector< double > support_grid(const Interval& s, int points = 11, bool interior = false)
{
    std::vector< double > xs;
    for (int j = 0; j < points; ++j)
    {
        if (interior && (j == 0 || j == points - 1))
            continue;
        xs.push_back(j == points - 1 ? s.hi : s.lo + (s.hi - s.lo) * j / (points - 1));
    }
    return xs;
}

namespace detail
{
/// max over i < count of residual(i); exceptions count as an infinite residual.
inline CheckResult run_check(std::string name, std::size_t count, double tolerance, int threads,
                             const std::function< double(std::size_t) >& residual)
{
    const int           n_threads = std::max(1, std::min< int >(threads, static_cast< int >(count)));
    std::vector< double > partial(static_cast< std::size_t >(n_threads), 0.0);
    std::mutex          note_mutex;
    std::string         note;

    auto worker = [&](int t) {
        double worst = 0.0;
        for (std::size_t i = static_cast< std::size_t >(t); i < count; i += static_cast< std::size_t >(n_threads))
        {
            double r;
            try
            {
                r = residual(i);
            }
            catch (const std::exception& e)
            {
                r = std::numeric_limits< double >::infinity();
                std::lock_guard lock(note_mutex);
                if (note.empty())
                    note = e.what();
            }
            if (!(r <= worst)) // NaN propagates as failure
                worst = std::isnan(r) ? std::numeric_limits< double >::infinity() : r;
        }
        partial[static_cast< std::size_t >(t)] = worst;
    };

    if (n_threads == 1)
        worker(0);
    else
    {
        std::vector< std::jthread > pool;
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker, t);
    }

    CheckResult res;
    res.name          = std::move(name);
    res.points_tested = static_cast< long >(count);
    res.max_residual  = *std::max_element(partial.begin(), partial.end());
    res.tolerance     = tolerance;
    res.passed        = res.max_residual <= tolerance;
    res.note          = note;
    return res;
}
} // namespace detail

namespace detail
{
/// Runs `body`; an exception becomes a failed check named `name`.
template < class F > void guarded_impl(VerificationReport& rep, const std::string& name, F&& body)
{
    try
    {
        body();
    }
    catch (const std::exception& e)
    {
        rep.checks.push_back({name, 0, std::numeric_limits< double >::infinity(), 0.0, false, e.what()});
    }
}
} // namespace detail

inline constexpr double tol_m0             = 1e-10;
inline constexpr double tol_riccati        = 1e-11;
inline constexpr double tol_moment_ode     = 1e-7;
inline constexpr double tol_orthogonality  = 1e-9;
inline constexpr double tol_norm_identity  = 1e-8;
inline constexpr double tol_cross_check    = 1e-8;
inline constexpr double tol_equations      = 1e-12;
inline constexpr double tol_identity       = 1e-10;
inline constexpr double tol_gf3            = 1e-12;
inline constexpr double tol_jacobi_shift   = 1e-9;
inline constexpr double tol_uniqueness     = 1e-12;
inline constexpr double tol_conjugate      = 1e-13;
inline constexpr int    orthogonality_nodes = 24;
inline constexpr int    moment_nodes        = 120;
inline constexpr int    orthogonality_degree = 10;
inline constexpr int    cross_check_degree  = 8;

/// Validates the verify parameters; throws ParameterError / PreconditionError.
inline MeasureSpec validate_verify(const VerifyOptions& o, GenFunClosedForm* cf_out = nullptr)
{
    const double lambda = o.family == Family::FreeMeixner ? 1.0 : o.lambda;
    MeasureSpec  m      = build_measure(o.family, lambda, o.a, o.b);
    GenFunClosedForm cf = closed_form(m);
    if (!(o.zmax > 0.0) || !(o.zmax < cf.domain_radius))
        throw PreconditionError("zmax must lie in (0, " + format_g17(cf.domain_radius) + ") for this family");
    if (o.grid < 4)
        throw PreconditionError("grid must be >= 4");
    if (!(o.tol > 0.0))
        throw PreconditionError("tol must be > 0");
    if (cf_out)
        *cf_out = std::move(cf);
    return m;
}

inline VerificationReport run_verify(const VerifyOptions& o)
{
    const auto       start = std::chrono::steady_clock::now();
    GenFunClosedForm cf;
    const MeasureSpec m = validate_verify(o, &cf);
    const JacobiSzegoSequence seq = recurrence_of(m);
    const double lambda = m.lambda, alpha1 = seq.alpha(1), omega2 = seq.omega(2);
    const int    threads = std::max(1, o.threads);

    VerificationReport rep;
    rep.family = std::string(to_string(o.family));
    rep.lambda = lambda;
    if (o.family == Family::FreeMeixner)
    {
        rep.a = o.a;
        rep.b = o.b;
    }
    rep.zmax = o.zmax;
    rep.grid = o.grid;
    rep.tol  = o.tol;

    const std::vector< double > angles = circle_angles(o.grid);
    const std::vector< double > xs     = support_grid(m.support);
    const std::vector< double > zs_real{-o.zmax, -0.5 * o.zmax, -0.2 * o.zmax, 0.2 * o.zmax, 0.5 * o.zmax, o.zmax};
    auto circle = [&](double r, std::size_t k) { return std::polar(r, angles[k]); };
    auto add    = [&](CheckResult c) { rep.checks.push_back(std::move(c)); };
    const std::size_t na = angles.size(), nx = xs.size();
    auto guarded = [](VerificationReport& r, const std::string& name, auto&& body) { detail::guarded_impl(r, name, body); };

    // generating function: series against closed form
    add(detail::run_check("series_vs_closed", na * nx, o.tol, threads, [&](std::size_t i) {
        const cplx         z = circle(o.zmax, i / nx);
        const double       x = xs[i % nx];
        const SeriesResult s = psi_series_auto(seq, lambda, z, x);
        if (s.warning)
            return std::numeric_limits< double >::infinity();
        const cplx c = psi_closed(cf, z, x);
        return std::abs(s.value - c) / (1.0 + std::abs(c));
    }));
    add(detail::run_check("conjugate_symmetry", na * nx, tol_conjugate, threads, [&](std::size_t i) {
        const cplx   z = circle(o.zmax, i / nx);
        const double x = xs[i % nx];
        const cplx   p = psi_closed(cf, z, x);
        return std::abs(psi_closed(cf, std::conj(z), x) - std::conj(p)) / (1.0 + std::abs(p));
    }));

    // psi-family moments
    add(detail::run_check("moment_m0", zs_real.size(), std::min(o.tol, tol_m0), 1, [&](std::size_t i) {
        return std::abs(psi_family_moments(m, cf, zs_real[i], moment_nodes).m0 - 1.0);
    }));
    add(detail::run_check("moment_m1", zs_real.size(), o.tol, 1, [&](std::size_t i) {
        return std::abs(psi_family_moments(m, cf, zs_real[i], moment_nodes).m1 -
                        predicted_moments(lambda, alpha1, omega2, zs_real[i]).m1);
    }));
    add(detail::run_check("moment_m2", zs_real.size(), o.tol, 1, [&](std::size_t i) {
        return std::abs(psi_family_moments(m, cf, zs_real[i], moment_nodes).m2 -
                        predicted_moments(lambda, alpha1, omega2, zs_real[i]).m2);
    }));

    // Riccati machinery
    const RiccatiCoefficients rc = coefficients(lambda, alpha1, omega2);
    add(detail::run_check("residual_f", 2 * na, tol_riccati, threads, [&](std::size_t i) {
        return std::abs(residual_f(cf, rc, circle(i < na ? 0.5 * o.zmax : o.zmax, i % na)));
    }));
    add(detail::run_check("residual_u", 2 * na, tol_riccati, threads, [&](std::size_t i) {
        return std::abs(residual_u(cf, circle(i < na ? 0.5 * o.zmax : o.zmax, i % na)));
    }));
    const std::vector< double > ode_z{0.25 * o.zmax, 0.5 * o.zmax, o.zmax};
    add(detail::run_check("residual_moment_ode", ode_z.size(), tol_moment_ode, 1, [&](std::size_t i) {
        const OdeResiduals r = residual_moment_ode(cf, m, ode_z[i]);
        return std::max(r.r_first, r.r_second);
    }));
    add(detail::run_check("h_lambda_initial", 1, 0.0, 1, [&](std::size_t) {
        h_lambda_initial(cf, alpha1, omega2);
        return 0.0;
    }));
    add(detail::run_check("degree_bound", 4, 1e-12, 1, [&](std::size_t i) {
        return degree_bound_check(lambda, alpha1, omega2, static_cast< int >(i) + 3);
    }));

    // number of support points when some omega_n vanishes (free Meixner with b = -1)
    int support_size = std::numeric_limits< int >::max();
    for (int n = 1; n <= 4 * cross_check_degree; ++n)
        if (seq.omega(n) == 0.0)
        {
            support_size = n;
            break;
        }

    // orthogonality under a 24-node Gauss rule
    guarded(rep, "orthogonality", [&] {
        const QuadratureRule rule = gauss_quadrature(seq, std::min(orthogonality_nodes, support_size));
        const int            N    = std::min(orthogonality_degree, support_size - 1);
        std::vector< std::vector< double > > P(rule.size());
        for (std::size_t k = 0; k < rule.size(); ++k)
            P[k] = eval_monic(seq, N, rule.nodes[k]).values;
        auto inner = [&](int i, int j) {
            double s = 0.0;
            for (std::size_t k = 0; k < rule.size(); ++k)
                s += rule.weights[k] * P[k][static_cast< std::size_t >(i)] * P[k][static_cast< std::size_t >(j)];
            return s;
        };
        const auto n1 = static_cast< std::size_t >(N + 1);
        add(detail::run_check("orthogonality", n1 * n1, tol_orthogonality, 1, [&](std::size_t idx) {
            const int i = static_cast< int >(idx / n1), j = static_cast< int >(idx % n1);
            if (i == j)
                return 0.0;
            return std::abs(inner(i, j)) / std::sqrt(norm_squared(seq, i) * norm_squared(seq, j));
        }));
        add(detail::run_check("norm_identity", n1, tol_norm_identity, 1, [&](std::size_t i) {
            const double ns = norm_squared(seq, static_cast< int >(i));
            return std::abs(inner(static_cast< int >(i), static_cast< int >(i)) - ns) / ns;
        }));
    });

    // recurrence cross-check through the Stieltjes procedure
    guarded(rep, m.has_density() ? "stieltjes_density_cross_check" : "stieltjes_round_trip", [&] {
        const int order = std::min(4 * cross_check_degree, support_size);
        const int n_max = std::min(cross_check_degree, (order - 1) / 2);
        const QuadratureRule rule = m.has_density() ? density_rule(m) : gauss_quadrature(seq, order);
        const JacobiSzegoSequence st = stieltjes_from_quadrature(rule, n_max);
        add(detail::run_check(m.has_density() ? "stieltjes_density_cross_check" : "stieltjes_round_trip",
                              2 * static_cast< std::size_t >(n_max + 1), tol_cross_check, 1, [&](std::size_t i) {
                                  const int n = static_cast< int >(i / 2);
                                  return i % 2 == 0 ? std::abs(st.alpha(n) - seq.alpha(n))
                                                    : std::abs(st.omega(n) - seq.omega(n));
                              }));
    });

    // classification solver against the catalog
    if (o.family != Family::FreeMeixner)
        guarded(rep, "classification_match", [&] {
        const bool sym = o.family == Family::Sym1 || o.family == Family::Sym2;
        const auto sols = sym ? solve_symmetric(lambda) : solve_nonsymmetric(lambda);
        const ClassificationSolution& s =
            sols[o.family == Family::Sym1 || o.family == Family::NonSymPlus ? 0 : 1];
        add(detail::run_check("classification_match", 2, tol_cross_check, 1, [&](std::size_t i) {
            return i == 0 ? std::abs(s.omega2 - omega2) : std::abs(s.alpha1 - alpha1);
        }));
        add(detail::run_check("classification_equations", 5, tol_equations, 1,
                              [&](std::size_t i) { return std::abs(s.equation_residuals[i]); }));
        add(detail::run_check("solution_residual_f", 2 * na, tol_riccati, threads, [&](std::size_t i) {
            return std::abs(residual_f(s, circle(i < na ? 0.5 * o.zmax : o.zmax, i % na)));
        }));
        });

    // family-specific identities
    switch (o.family)
    {
    case Family::Sym1: {
        add(detail::run_check("tilde_gegenbauer_identity", na * nx, tol_identity, threads, [&](std::size_t i) {
            return tilde_gegenbauer_identity(lambda, circle(o.zmax, i / nx), xs[i % nx]);
        }));
        const std::vector< double > ys = support_grid({-1.0, 1.0});
        add(detail::run_check("gegenbauer_gf", na * ys.size(), tol_identity, threads, [&](std::size_t i) {
            return gegenbauer_gf_check(lambda, circle(std::min(o.zmax, 0.3), i / ys.size()), ys[i % ys.size()]);
        }));
        break;
    }
    case Family::Sym2:
        add(detail::run_check("family2_identity", na * nx, tol_identity, threads, [&](std::size_t i) {
            return family2_identity(lambda, circle(o.zmax, i / nx), xs[i % nx]);
        }));
        break;
    case Family::NonSymPlus:
    case Family::NonSymMinus: {
        const JacobiSign sign = o.family == Family::NonSymPlus ? JacobiSign::plus : JacobiSign::minus;
        const double     sg   = sign == JacobiSign::plus ? 1.0 : -1.0;
        add(detail::run_check("gf3_equivalence", zs_real.size() * nx, tol_gf3, threads, [&](std::size_t i) {
            return gf3_equivalence(lambda, zs_real[i / nx], xs[i % nx], sign);
        }));
        add(detail::run_check("jacobi_shift", 11 * nx, tol_jacobi_shift, threads, [&](std::size_t i) {
            return jacobi_shift_check(lambda, static_cast< int >(i / nx), xs[i % nx], sign);
        }));
        // series in shifted Jacobi polynomials, evaluated at y = (s x - 1)/(2 lambda), t = lambda z / s
        // (minus: mirrored through (z, x) -> (-z, -x)), against the factored closed form
        const std::vector< double > xi = support_grid(m.support, 11, true);
        const double s = std::sqrt(2.0 * lambda - 1.0);
        add(detail::run_check("jacobi_2f1_chain", zs_real.size() * xi.size(), tol_identity, threads, [&](std::size_t i) {
            const double z = zs_real[i / xi.size()], x = xi[i % xi.size()];
            const double y = (s * sg * x - 1.0) / (2.0 * lambda), t = lambda * sg * z / s;
            const SeriesResult sr =
                psi_series_auto(monic_jacobi_sequence(lambda - 0.5, lambda - 1.5), lambda, 2.0 * t, y);
            return std::abs(sr.value.real() - gf3_closed(lambda, z, x, sign).real());
        }));
        break;
    }
    case Family::FreeMeixner:
        add(detail::run_check("free_meixner_uniqueness", 15, tol_uniqueness, 1, [&](std::size_t i) {
            return std::abs(free_meixner_uniqueness(o.a, o.b, 15).c[i]);
        }));
        break;
    }

    rep.wall_time_ms = std::chrono::duration_cast< std::chrono::milliseconds >(std::chrono::steady_clock::now() - start)
                           .count();
    return rep;
}

namespace detail
{
inline nlohmann::ordered_json number_or_null(double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); }
} // namespace detail

inline nlohmann::ordered_json to_json(const VerificationReport& r)
{
    nlohmann::ordered_json j;
    j["schema"]       = 1;
    j["command"]      = "verify";
    j["tool_version"] = r.tool_version;
    j["family"]       = r.family;
    j["lambda"]       = r.lambda;
    if (r.a)
        j["a"] = *r.a;
    if (r.b)
        j["b"] = *r.b;
    j["zmax"]   = r.zmax;
    j["grid"]   = r.grid;
    j["tol"]    = r.tol;
    j["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : r.checks)
    {
        nlohmann::ordered_json cj{{"name", c.name},
                          {"points_tested", c.points_tested},
                          {"max_residual", detail::number_or_null(c.max_residual)},
                          {"tolerance", c.tolerance},
                          {"passed", c.passed}};
        if (!c.note.empty())
            cj["note"] = c.note;
        j["checks"].push_back(std::move(cj));
    }
    j["passed"]       = r.passed();
    j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

inline nlohmann::ordered_json solution_json(const ClassificationSolution& s)
{
    nlohmann::ordered_json j{{"branch", s.branch_label},
                     {"symmetric", s.symmetric},
                     {"valid", s.valid},
                     {"omega2", s.omega2},
                     {"alpha1", s.alpha1},
                     {"e_coeffs", {s.e_coeffs[0], s.e_coeffs[1], s.e_coeffs[2]}},
                     {"max_residual", s.max_residual}};
    if (std::isfinite(s.discriminant))
        j["discriminant"] = s.discriminant;
    return j;
}

/// All classification branches at lambda.
inline nlohmann::ordered_json classify_json(double lambda)
{
    if (!std::isfinite(lambda) || !(lambda > 0.0))
        throw ParameterError("lambda must be > 0");
    nlohmann::ordered_json j;
    j["schema"]       = 1;
    j["command"]      = "classify";
    j["tool_version"] = version_string;
    j["lambda"]       = lambda;
    j["solutions"]    = nlohmann::ordered_json::array();
    j["notes"]        = nlohmann::ordered_json::array();
    if (std::abs(lambda - 1.0) < degenerate_lambda_band)
    {
        j["notes"].push_back("degenerate case: free Meixner family (alpha_n = a for n >= 1, omega_n = 1 + b for "
                             "n >= 2, b >= -1); f(z) = (1 + a z + (1 + b) z^2) / z is the unique solution");
        return j;
    }
    if (std::abs(lambda - 0.5) < degenerate_lambda_band)
    {
        j["notes"].push_back("lambda = 1/2 is degenerate for the classification system");
        return j;
    }
    for (const auto& s : solve_symmetric(lambda))
        j["solutions"].push_back(solution_json(s));
    if (lambda > 0.5)
        for (const auto& s : solve_nonsymmetric(lambda))
            j["solutions"].push_back(solution_json(s));
    else
        j["notes"].push_back("non-symmetric family requires lambda > 1/2");
    return j;
}

/// JSON text with every floating-point number printed to 17 significant digits.
inline void write_json(std::ostream& out, const nlohmann::ordered_json& j, int indent = 0)
{
    const std::string pad(static_cast< std::size_t >(indent + 2), ' ');
    const std::string close_pad(static_cast< std::size_t >(indent), ' ');
    switch (j.type())
    {
    case nlohmann::ordered_json::value_t::object: {
        if (j.empty())
        {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it)
        {
            if (!first)
                out << ",\n";
            first = false;
            out << pad << nlohmann::ordered_json(it.key()).dump() << ": ";
            write_json(out, it.value(), indent + 2);
        }
        out << '\n' << close_pad << '}';
        return;
    }
    case nlohmann::ordered_json::value_t::array: {
        if (j.empty())
        {
            out << "[]";
            return;
        }
        out << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i)
        {
            if (i)
                out << ",\n";
            out << pad;
            write_json(out, j[i], indent + 2);
        }
        out << '\n' << close_pad << ']';
        return;
    }
    case nlohmann::ordered_json::value_t::number_float: out << format_g17(j.get< double >()); return;
    default: out << j.dump(); return;
    }
}

inline std::string json_text(const nlohmann::ordered_json& j)
{
    std::ostringstream os;
    write_json(os, j);
    os << '\n';
    return os.str();
}

/// Writes `text` to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& text)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << text;
        f.flush();
        if (!f)
            throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
    {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot move report into place at " + path.string());
    }
}
} // namespace opgf

#endif // OPGF_REPORT_HPP
