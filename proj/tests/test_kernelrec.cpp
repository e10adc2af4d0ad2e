#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entry_check.hpp"
#include "oracles.hpp"
#include "radonkit/kernelrec.hpp"

#include <cmath>
#include <iostream>
#include <random>

using namespace radonkit;

namespace {

KernelModel gaussian_model(double eps)
{
    KernelModel m = KernelModel::defaults(KernelFamily::gaussian);
    m.eps = eps;
    return m;
}

WindowSpec window_of(WindowFamily f, double nu = 0.5, double L = 20.0)
{
    WindowSpec w;
    w.family = f;
    w.nu = nu;
    w.L = L;
    return w;
}

}  // namespace

TEST_CASE("basis values at zero offset")
{
    const KernelModel g = gaussian_model(30.0);
    CHECK(std::abs(basis_eval(g, {0.3, 0.4}, line_point({0.3, 0.4}, 0.7)) - std::sqrt(kPi) / 30.0) <= 1e-15);
    const KernelModel w = KernelModel::defaults(KernelFamily::wendland20);
    CHECK(std::abs(basis_profile(w, 0.0) - 2.0 / (3.0 * 1.1)) <= 1e-15);
    const KernelModel q = KernelModel::defaults(KernelFamily::imq);
    CHECK(std::abs(basis_profile(q, 0.0) - 2.0 / 30.0 * std::asinh(30.0 * 20.0)) <= 1e-14);
}

TEST_CASE("basis profiles are line integrals of the kernels")
{
    // gaussian e^{-eps^2 r^2}, imq truncated at L1, wendland (1 - eps r)_+^2, mq sqrt(1 + rho^2 r^2) e^{-eps^2 r^2}
    KernelModel g = gaussian_model(3.0);
    KernelModel q = KernelModel::defaults(KernelFamily::imq);
    q.eps = 2.0;
    q.L1 = 1.5;
    KernelModel w = KernelModel::defaults(KernelFamily::wendland20);
    KernelModel mq = KernelModel::defaults(KernelFamily::mq);
    mq.eps = 2.0;
    mq.rho = 1.3;
    for (double u : {0.0, 0.1, 0.35, 0.8, 1.2}) {
        const double G = oracle::simpson_adaptive([&](double s) { return std::exp(-9.0 * (u * u + s * s)); }, -8, 8, 1e-14);
        CHECK(std::abs(basis_profile(g, u) - G) <= 1e-10);
        if (u < 1.5) {
            const double S = std::sqrt(1.5 * 1.5 - u * u);
            const double I = oracle::simpson_adaptive(
                [&](double s) { return 1.0 / std::sqrt(1.0 + 4.0 * (u * u + s * s)); }, -S, S, 1e-14);
            CHECK(std::abs(basis_profile(q, u) - I) <= 1e-10);
        }
        const double Smax = 1.0 / 1.1;
        if (u < Smax) {
            const double S = std::sqrt(Smax * Smax - u * u);
            const double W = oracle::simpson_adaptive(
                [&](double s) { return std::pow(std::max(0.0, 1.0 - 1.1 * std::sqrt(u * u + s * s)), 2); }, -S, S,
                1e-14);
            CHECK(std::abs(basis_profile(w, u) - W) <= 1e-9);
        }
        const double MQ = oracle::simpson_adaptive(
            [&](double s) { return std::sqrt(1.0 + 1.69 * (u * u + s * s)) * std::exp(-4.0 * (u * u + s * s)); }, -8,
            8, 1e-14);
        CHECK(std::abs(basis_profile(mq, u) - MQ) <= 1e-9);
    }
}

TEST_CASE("ab pair")
{
    const ABPair p = ab_pair({0.2, 1.0}, {0.5, 0.4});
    CHECK(p.a == std::sin(0.6));
    CHECK(std::abs(p.b - (0.5 - 0.2 * std::cos(0.6))) <= 1e-16);
    CHECK(p.r == 0.2);
    CHECK(ab_pair({0.2, 1.0}, {0.5, 1.0}).a == 0.0);
    CHECK(ab_pair({0.2, 1.0}, {0.5, 1.0 + 1e-14}).a == 0.0);
}

TEST_CASE("gaussian entries")
{
    const KernelModel g1 = gaussian_model(1.0);
    const WindowSpec none = window_of(WindowFamily::none);
    CHECK(std::abs(matrix_entry(g1, none, {0.1, kHalfPi}, {0.7, 0.0}) - kPi) <= 1e-15);
    CHECK_THROWS_AS(matrix_entry(g1, none, {0.1, 0.3}, {0.2, 0.3}), NumericalError);

    const KernelModel g = gaussian_model(30.0);
    const WindowSpec tr = window_of(WindowFamily::truncation, 0.5, 2.0);
    CHECK(std::abs(matrix_entry(g, tr, {0.0, 0.4}, {0.0, 0.4}) - 2.0 * std::sqrt(kPi) * 2.0 / 30.0) <= 1e-14);

    // gaussian window vs oracle on the probes, both widths
    for (double nu : {0.1, 0.5, 2.0}) {
        const WindowSpec gw = window_of(WindowFamily::gaussian, nu);
        for (const auto& [k, j] : audit_probes()) {
            const double c = matrix_entry(g, gw, k, j);
            const double o = oracle_entry(g, gw, k, j, 1e-12);
            CHECK(std::abs(c - o) <= 1e-8 * std::max(1.0, std::abs(o)));
        }
    }
    for (const auto& [k, j] : audit_probes()) {
        if (ab_pair(k, j).a == 0.0) continue;
        const double c = matrix_entry(g, none, k, j);
        CHECK(std::abs(c - oracle_entry(g, none, k, j, 1e-12)) <= 1e-8 * std::max(1.0, c));
        CHECK(std::abs(c - kPi / (900.0 * std::abs(std::sin(k.theta - j.theta)))) <= 1e-12 * c);
    }
}

TEST_CASE("gaussian truncation: erf rewrite and large-L limit")
{
    const double eps = 3.0;
    const KernelModel g = gaussian_model(eps);
    for (const auto& [k, j] : audit_probes()) {
        const ABPair ab = ab_pair(k, j);
        if (ab.a == 0.0) continue;
        for (double L : {0.95, 1.5, 4.0}) {
            const double S = std::sqrt(L * L - ab.r * ab.r);
            const double aa = std::abs(ab.a);
            const double c1 = eps * (-aa * S + ab.b), c2 = eps * (aa * S + ab.b);
            const double rewrite = kPi / (2.0 * eps * eps * aa) * (std::erf(c2) - std::erf(c1));
            const double got = gaussian_truncation_entry(eps, L, ab);
            CHECK(std::abs(got - rewrite) <= 1e-15 * std::max(1.0, std::abs(rewrite)) + 1e-16);
            const double o = oracle_entry(g, window_of(WindowFamily::truncation, 0.5, L), k, j, 1e-13);
            CHECK(std::abs(got - o) <= 1e-9);
        }
        const double limit = kPi / (eps * eps * std::abs(ab.a));
        double prev = 1e300;
        for (double L : {10.0, 100.0, 1000.0}) {
            const double e = std::abs(gaussian_truncation_entry(eps, L, ab) - limit);
            CHECK(e <= prev);
            prev = e;
        }
        CHECK(prev <= 1e-12);
    }
}

TEST_CASE("window bound")
{
    // |windowed - unwindowed| <= sup|w - 1| over the basis support times the L1 mass along the line
    const double eps = 30.0, nu = 0.01;
    const KernelModel g = gaussian_model(eps);
    const WindowSpec gw = window_of(WindowFamily::gaussian, nu);
    for (const auto& [k, j] : audit_probes()) {
        const ABPair ab = ab_pair(k, j);
        if (ab.a == 0.0) continue;
        const double unw = kPi / (eps * eps * std::abs(ab.a));
        const double s_star = -ab.b / ab.a, half = 10.0 / (eps * std::abs(ab.a));
        const double far = std::max(std::abs(s_star - half), std::abs(s_star + half));
        const double sup = 1.0 - std::exp(-nu * nu * (ab.r * ab.r + far * far));
        const double diff = std::abs(oracle_entry(g, gw, k, j, 1e-13) - unw);
        CHECK(diff <= sup * unw + 1e-12);
    }
}

TEST_CASE("wendland limit and oracle agreement")
{
    const KernelModel w = KernelModel::defaults(KernelFamily::wendland20);
    const double eps = w.eps;
    for (const auto& [k, j] : audit_probes()) {
        const ABPair ab = ab_pair(k, j);
        if (ab.a == 0.0) continue;
        const double limit = kPi / (6.0 * eps * eps * std::abs(ab.a));
        CHECK(std::abs(wendland_compact_entry(eps, 1e-8, ab) - limit) <= 1e-6);
        for (double nu : {0.2, 0.5}) {
            const double o = oracle_entry(w, window_of(WindowFamily::compact, nu), k, j, 1e-12);
            CHECK(std::abs(wendland_compact_entry(eps, nu, ab) - o) <= 1e-8);
        }
    }
    // the unwindowed integral over the whole profile: int g = pi / (6 eps^2), independent check
    const double mass = oracle::simpson_adaptive([&](double u) { return basis_profile(w, u); }, -1.0 / eps, 1.0 / eps, 1e-14);
    CHECK(std::abs(mass - kPi / (6.0 * eps * eps)) <= 1e-9);
}

TEST_CASE("compact wendland special branches")
{
    const double eps = 1.1;
    ABPair far{0.5, 0.1, 3.0};
    CHECK(wendland_compact_entry(eps, 0.5, far) == 0.0);
    ABPair wide{0.0, 1.0, 0.1};
    CHECK(wendland_compact_entry(eps, 0.5, wide) == 0.0);
    // equal angles: profile times the compact window's line integral
    const KernelModel w = KernelModel::defaults(KernelFamily::wendland20);
    for (double b : {0.0, 0.2, -0.5}) {
        const LineParam k{0.3, 0.9}, j{0.3 + b, 0.9};
        const double o = oracle_entry(w, window_of(WindowFamily::compact, 0.7), k, j, 1e-13);
        CHECK(std::abs(wendland_compact_entry(eps, 0.7, ab_pair(k, j)) - o) <= 1e-10);
    }
}

TEST_CASE("imq antiderivative checks are logged")
{
    const double M = 2.0;
    auto integrand = [&](double u) { return std::asinh(std::sqrt((M * M - u * u) / (1.0 + u * u))); };
    const double h = 1e-5;
    const double fd = (imq_antiderivative(0.3 + h, M) - imq_antiderivative(0.3 - h, M)) / (2.0 * h);
    const double fd_dev = std::abs(fd - integrand(0.3));
    const double defint = imq_antiderivative(0.5, M) - imq_antiderivative(-0.5, M);
    const double quad = oracle::simpson_adaptive(integrand, -0.5, 0.5, 1e-13);
    const double int_dev = std::abs(defint - quad);
    std::cout << "imq antiderivative: derivative deviation " << fd_dev << ", definite-integral deviation " << int_dev << "\n";
    CHECK(std::isfinite(imq_antiderivative(0.0, M)));
    CHECK_THROWS_AS(imq_antiderivative(2.0, M), std::domain_error);

    const KernelModel q = KernelModel::defaults(KernelFamily::imq);
    const AuditResult audit = audit_entries(q, WindowSpec::defaults(KernelFamily::imq));
    std::cout << "imq audit: deviation " << audit.max_deviation << ", route " << to_string(audit.route) << "\n";
    if (fd_dev > 1e-5 || int_dev > 1e-5) CHECK(audit.route == EntryRoute::oracle_fallback);
}

TEST_CASE("audit routes")
{
    const AuditResult gg = audit_entries(gaussian_model(30.0), window_of(WindowFamily::gaussian, 0.5));
    CHECK(gg.route == EntryRoute::closed_form);
    const AuditResult gt = audit_entries(gaussian_model(30.0), window_of(WindowFamily::truncation, 0.5, 20.0));
    CHECK(gt.route == EntryRoute::closed_form);
    const AuditResult mq = audit_entries(KernelModel::defaults(KernelFamily::mq), WindowSpec::defaults(KernelFamily::mq));
    std::cout << "mq audit: deviation " << mq.max_deviation << ", route " << to_string(mq.route) << "\n";
    const AuditResult wd =
        audit_entries(KernelModel::defaults(KernelFamily::wendland20), WindowSpec::defaults(KernelFamily::wendland20));
    std::cout << "wendland audit: deviation " << wd.max_deviation << ", route " << to_string(wd.route) << "\n";
    CHECK(audit_probes().size() == 25);
}

TEST_CASE("oracle fallback agrees with a second quadrature rule")
{
    struct Case {
        KernelModel m;
        WindowSpec w;
    };
    KernelModel q = KernelModel::defaults(KernelFamily::imq);
    q.L1 = 3.0;
    WindowSpec qw = WindowSpec::defaults(KernelFamily::imq);
    qw.L = 3.0;
    std::vector<Case> cases{{q, qw},
                            {KernelModel::defaults(KernelFamily::mq), WindowSpec::defaults(KernelFamily::mq)},
                            {KernelModel::defaults(KernelFamily::wendland20), window_of(WindowFamily::compact, 0.5)}};
    for (const auto& c : cases) {
        for (const auto& [k, j] : audit_probes()) {
            const double o = oracle_entry(c.m, c.w, k, j, 1e-10);
            const double second = oracle::entry_by_gk31(c.m, c.w, k, j);
            INFO(to_string(c.m.family));
            CHECK(std::abs(o - second) <= 1e-6 * std::max(1.0, std::abs(o)));
        }
    }
}

TEST_CASE("entries depend on the pair only through a, b, r")
{
    const KernelModel g = gaussian_model(10.0);
    const WindowSpec gw = window_of(WindowFamily::gaussian, 0.5);
    const SampleSet s = parallel_beam_samples(4, 2, 0.3);
    Sinogram sino = sample(builtin("crescent"), s);
    const KernelSystem sys = assemble_kernel_system(g, gw, s, sino);
    // reverse the sample order
    SampleSet r = s;
    std::reverse(r.samples.begin(), r.samples.end());
    Sinogram rs = sample(builtin("crescent"), r);
    const KernelSystem rsys = assemble_kernel_system(g, gw, r, rs);
    const Eigen::Index n = sys.A.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) CHECK(rsys.A(n - 1 - i, n - 1 - j) == sys.A(i, j));
}

TEST_CASE("scaled system")
{
    const KernelModel g = gaussian_model(30.0);
    const WindowSpec gw = window_of(WindowFamily::gaussian, 0.5);
    const Phantom cr = builtin("crescent");
    const SampleSet s = parallel_beam_samples(6, 5, 0.2);
    const Sinogram sino = sample(cr, s);
    const KernelSystem plain = assemble_kernel_system(g, gw, s, sino);
    const KernelSystem one = assemble_kernel_system(g, gw, s, sino, 1.0, &cr);
    CHECK(plain.A == one.A);
    CHECK(plain.rhs == one.rhs);
    for (Eigen::Index k = 0; k < plain.A.rows(); ++k)
        for (Eigen::Index j = 0; j < plain.A.cols(); ++j)
            CHECK(plain.A(k, j) == matrix_entry(g, gw, s[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(j)]));
    const KernelSolution a = solve_and_evaluate(plain, g, s, 16), b = solve_and_evaluate(one, g, s, 16);
    CHECK(a.image.values == b.image.values);

    // unwindowed gaussian: entries quarter, rhs halves when h doubles
    const WindowSpec diag = [] {
        WindowSpec w;
        w.family = WindowFamily::gaussian;
        w.mode = WindowMode::diagonal;
        return w;
    }();
    const KernelSystem h1 = assemble_kernel_system(g, diag, s, sino, 1.0, &cr);
    const KernelSystem h2 = assemble_kernel_system(g, diag, s, sino, 2.0, &cr);
    for (Eigen::Index k = 0; k < h1.A.rows(); ++k) {
        CHECK(std::abs(h2.rhs(k) - radon_analytic(cr, {2.0 * s[static_cast<std::size_t>(k)].t,
                                                       s[static_cast<std::size_t>(k)].theta}) / 2.0) <= 1e-15);
        for (Eigen::Index j = 0; j < h1.A.cols(); ++j) {
            if (ab_pair(s[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(j)]).a == 0.0) continue;
            CHECK(std::abs(h2.A(k, j) - h1.A(k, j) / 4.0) <= 1e-15 * h1.A(k, j));
        }
    }
    CHECK_THROWS_AS(assemble_kernel_system(g, gw, s, sino, 2.0), std::invalid_argument);
}

TEST_CASE("system assembly and solve")
{
    const KernelModel g = gaussian_model(30.0);
    const WindowSpec gw = window_of(WindowFamily::gaussian, 0.5);
    const Phantom cr = builtin("crescent");
    const SampleSet s = parallel_beam_samples(18, 20, 0.05);
    const Sinogram sino = sample(cr, s);
    const KernelSystem sys = assemble_kernel_system(g, gw, s, sino);
    CHECK(sys.A.rows() == 738);
    CHECK(sys.A.allFinite());
    CHECK(sys.rcond > 0.0);
    CHECK(sys.audit.route == EntryRoute::closed_form);

    const KernelSolution sol = solve_and_evaluate(sys, g, s, 32);
    CHECK(sol.residual_inf <= 1e-6 * sys.rhs.lpNorm<Eigen::Infinity>());
    CHECK(rmse(sol.image, rasterize(cr, 32)) < 0.25);

    KernelSystem zero = sys;
    zero.rhs.setZero();
    const KernelSolution z = solve_and_evaluate(zero, g, s, 8);
    CHECK(z.coefficients.cwiseAbs().maxCoeff() == 0.0);
    for (double v : z.image.values) CHECK(v == 0.0);
}

TEST_CASE("configuration errors")
{
    KernelModel g = gaussian_model(30.0);
    CHECK_THROWS_AS(check_compatible(g, window_of(WindowFamily::compact)), std::invalid_argument);
    g.eps = -1.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    KernelModel q = KernelModel::defaults(KernelFamily::imq);
    q.L1 = 1.0;
    const SampleSet s = parallel_beam_samples(3, 2, 0.4);
    CHECK_THROWS_AS(assemble_kernel_system(q, WindowSpec::defaults(KernelFamily::imq), s, sample(builtin("crescent"), s)),
                    std::invalid_argument);
    CHECK(parse_window_family("gauss") == WindowFamily::gaussian);
    CHECK(parse_window_mode("diag") == WindowMode::diagonal);
    CHECK_THROWS_AS(parse_kernel_family("sinc"), std::invalid_argument);
}
