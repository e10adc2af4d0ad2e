#include "radonkit/kernelrec.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace radonkit {

KernelModel KernelModel::defaults(KernelFamily f)
{
    KernelModel m;
    m.family = f;
    switch (f) {
    case KernelFamily::gaussian: m.eps = 30.0; break;
    case KernelFamily::imq: m.eps = 30.0; m.L1 = 20.0; break;
    case KernelFamily::mq: m.eps = 30.0; m.rho = 1.0; break;
    case KernelFamily::wendland20: m.eps = 1.1; break;
    }
    return m;
}

void KernelModel::validate() const
{
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("kernel: eps must be positive");
    if (family == KernelFamily::mq && !(rho > 0.0)) throw std::invalid_argument("kernel: rho must be positive");
    if (family == KernelFamily::imq && !(L1 > 0.0)) throw std::invalid_argument("kernel: L1 must be positive");
}

WindowSpec WindowSpec::defaults(KernelFamily f)
{
    WindowSpec w;
    switch (f) {
    case KernelFamily::gaussian: w.family = WindowFamily::gaussian; w.nu = 0.5; break;
    case KernelFamily::imq: w.family = WindowFamily::truncation; w.L = 20.0; break;
    case KernelFamily::mq: w.family = WindowFamily::gaussian; w.nu = 0.8; break;
    case KernelFamily::wendland20: w.family = WindowFamily::compact; w.nu = 1e-6; break;
    }
    return w;
}

double WindowSpec::eval(const Point& p) const
{
    const double q = p.x * p.x + p.y * p.y;
    switch (family) {
    case WindowFamily::none: return 1.0;
    case WindowFamily::truncation: return q <= L * L ? 1.0 : 0.0;
    case WindowFamily::gaussian: return std::exp(-nu * nu * q);
    case WindowFamily::compact: return std::max(0.0, 1.0 - nu * nu * q);
    }
    return 0.0;
}

void WindowSpec::validate() const
{
    if (family == WindowFamily::truncation && !(L > 0.0)) throw std::invalid_argument("window: L must be positive");
    if ((family == WindowFamily::gaussian || family == WindowFamily::compact) && !(nu > 0.0))
        throw std::invalid_argument("window: nu must be positive");
}

KernelFamily parse_kernel_family(const std::string& name)
{
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "imq") return KernelFamily::imq;
    if (name == "mq") return KernelFamily::mq;
    if (name == "wendland20") return KernelFamily::wendland20;
    throw std::invalid_argument("unknown kernel '" + name + "'");
}

WindowFamily parse_window_family(const std::string& name)
{
    if (name == "none") return WindowFamily::none;
    if (name == "trunc" || name == "truncation") return WindowFamily::truncation;
    if (name == "gauss" || name == "gaussian") return WindowFamily::gaussian;
    if (name == "compact") return WindowFamily::compact;
    throw std::invalid_argument("unknown window '" + name + "'");
}

WindowMode parse_window_mode(const std::string& name)
{
    if (name == "all") return WindowMode::all;
    if (name == "diag" || name == "diagonal") return WindowMode::diagonal;
    throw std::invalid_argument("unknown window mode '" + name + "'");
}

std::string to_string(KernelFamily f)
{
    switch (f) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::imq: return "imq";
    case KernelFamily::mq: return "mq";
    case KernelFamily::wendland20: return "wendland20";
    }
    return "?";
}

std::string to_string(WindowFamily f)
{
    switch (f) {
    case WindowFamily::none: return "none";
    case WindowFamily::truncation: return "trunc";
    case WindowFamily::gaussian: return "gauss";
    case WindowFamily::compact: return "compact";
    }
    return "?";
}

std::string to_string(WindowMode m) { return m == WindowMode::all ? "all" : "diag"; }

std::string to_string(EntryRoute r) { return r == EntryRoute::closed_form ? "closed-form" : "oracle-fallback"; }

void check_compatible(const KernelModel& model, const WindowSpec& window)
{
    model.validate();
    window.validate();
    if (window.family == WindowFamily::none) return;
    bool ok = false;
    switch (model.family) {
    case KernelFamily::gaussian:
        ok = window.family == WindowFamily::truncation || window.family == WindowFamily::gaussian;
        break;
    case KernelFamily::imq: ok = window.family == WindowFamily::truncation; break;
    case KernelFamily::mq: ok = window.family == WindowFamily::gaussian; break;
    case KernelFamily::wendland20: ok = window.family == WindowFamily::compact; break;
    }
    if (!ok)
        throw std::invalid_argument("kernel " + to_string(model.family) + " cannot be paired with window " +
                                    to_string(window.family));
}

ABPair ab_pair(const LineParam& k, const LineParam& j)
{
    ABPair p;
    p.r = k.t;
    if (k.theta == j.theta) {
        p.a = 0.0;
        p.b = j.t - k.t;
        return p;
    }
    const double delta = k.theta - j.theta;
    const double s = std::sin(delta);
    const double c = std::cos(delta);
    if (std::abs(s) < 1e-12) {
        p.a = 0.0;
        p.b = j.t - k.t * (c > 0.0 ? 1.0 : -1.0);
        return p;
    }
    p.a = s;
    p.b = j.t - k.t * c;
    return p;
}

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// e^z K_nu(z)
double scaled_bessel_k(int nu, double z)
{
    if (z < 600.0) return std::exp(z) * boost::math::cyl_bessel_k(nu, z);
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 12; ++k) {
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * z);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(kPi / (2.0 * z)) * sum;
}

double wendland_profile(double eps, double u)
{
    const double e = eps * std::abs(u);
    if (u == 0.0) return 2.0 / (3.0 * eps);
    if (e > 1.0) return 0.0;
    const double e2 = e * e;
    return 2.0 / eps * (std::sqrt(1.0 - e2) * (2.0 * e2 + 1.0) / 3.0 - e2 * radonkit::acosh(1.0 / e));
}

// difference erf(hi) - erf(lo) without cancellation in the tails
double erf_diff(double lo, double hi)
{
    if (lo >= 0.0) return radonkit::erfc(lo) - radonkit::erfc(hi);
    if (hi <= 0.0) return radonkit::erfc(-hi) - radonkit::erfc(-lo);
    return radonkit::erf(hi) - radonkit::erf(lo);
}

// closed-form antiderivative, extended to |u| = M by continuity; fails the audit
double imq_F(double u, double M)
{
    const double M2 = M * M;
    const double d = std::max(0.0, M2 - u * u);
    const double sq = std::sqrt(d);
    const double q = std::sqrt(M2 + 1.0);
    const double ratio = u / M;
    const double acos_term = std::acos(std::clamp(ratio, -1.0, 1.0));
    double atan_inner;
    if (d == 0.0) {
        atan_inner = std::copysign(kHalfPi, u);
    } else {
        atan_inner = std::atan(u * std::sqrt((M2 + 1.0) / d));
    }
    return 0.5 * u * radonkit::asinh(std::sqrt(d / (1.0 + u * u))) - (1.0 + M2) * std::atan(u) +
           q * (q - 1.0) * acos_term + M2 * atan_inner + 2.0 * (M2 + 1.0) * std::atan(u / (sq + q + 1.0));
}

double mq_profile_integral(const KernelModel& model)
{
    // integral of the profile over the real line: the kernel's integral over the plane
    auto f = [&](double r) { return 2.0 * kPi * r * std::sqrt(1.0 + model.rho * model.rho * r * r) *
                                    std::exp(-model.eps * model.eps * r * r); };
    return integrate(f, 0.0, 12.0 / model.eps, 1e-14);
}

double unwindowed_entry(const KernelModel& model, const ABPair& ab)
{
    if (ab.a == 0.0) throw NumericalError("unwindowed kernel entry is infinite for equal angles");
    const double aa = std::abs(ab.a);
    const double e2 = model.eps * model.eps;
    switch (model.family) {
    case KernelFamily::gaussian: return kPi / (e2 * aa);
    case KernelFamily::wendland20: return kPi / (6.0 * e2 * aa);
    case KernelFamily::imq: {
        const double M = model.eps * model.L1;
        return 2.0 / (e2 * aa) * (imq_F(M, M) - imq_F(-M, M));
    }
    case KernelFamily::mq: return mq_profile_integral(model) / aa;
    }
    return 0.0;
}

}  // namespace

double basis_profile(const KernelModel& model, double u)
{
    const double eps = model.eps;
    switch (model.family) {
    case KernelFamily::gaussian:
        return kSqrtPi / eps * std::exp(-eps * eps * u * u);
    case KernelFamily::imq: {
        if (std::abs(u) > model.L1) return 0.0;
        const double inner = (model.L1 * model.L1 - u * u) / (1.0 + eps * eps * u * u);
        return 2.0 / eps * radonkit::asinh(eps * std::sqrt(std::max(0.0, inner)));
    }
    case KernelFamily::mq: {
        const double rho = model.rho;
        const double c2 = 1.0 / (rho * rho) + u * u;
        const double z = eps * eps * c2 / 2.0;
        return rho * std::exp(-eps * eps * u * u) * 0.5 * c2 * (scaled_bessel_k(0, z) + scaled_bessel_k(1, z));
    }
    case KernelFamily::wendland20:
        return wendland_profile(eps, u);
    }
    return 0.0;
}

double basis_eval(const KernelModel& model, const LineParam& sample_j, const Point& x)
{
    const double u = sample_j.t - (x.x * std::cos(sample_j.theta) + x.y * std::sin(sample_j.theta));
    return basis_profile(model, u);
}

double mq_basis_closed_form(const KernelModel& model, double u)
{
    const double eps = model.eps, rho = model.rho;
    return kSqrtPi * rho / (2.0 * eps) * (1.0 / (rho * rho) + u * u) * std::exp(-eps * eps * u * u + 1.0 / (eps * eps));
}

double gaussian_truncation_entry(double eps, double L, const ABPair& ab)
{
    const double r2 = ab.r * ab.r;
    if (r2 >= L * L) return 0.0;
    const double S = std::sqrt(L * L - r2);
    if (ab.a == 0.0) return 2.0 * kSqrtPi / eps * std::exp(-eps * eps * ab.b * ab.b) * S;
    const double aa = std::abs(ab.a);
    const double c1 = eps * (ab.b - aa * S);
    const double c2 = eps * (ab.b + aa * S);
    return kPi / (2.0 * eps * eps * aa) * erf_diff(c1, c2);
}

double gaussian_window_entry(double eps, double nu, const ABPair& ab)
{
    const double C = ab.a * ab.a * eps * eps + nu * nu;
    return kPi * std::exp(-nu * nu * (ab.r * ab.r + eps * eps * ab.b * ab.b / C)) / (eps * std::sqrt(C));
}

double gaussian_unwindowed_entry(double eps, const ABPair& ab)
{
    if (ab.a == 0.0) throw NumericalError("unwindowed kernel entry is infinite for equal angles");
    return kPi / (eps * eps * std::abs(ab.a));
}

double imq_antiderivative(double u, double M)
{
    if (!(M > 0.0)) throw std::domain_error("imq_antiderivative: M must be positive");
    if (!(std::abs(u) < M)) throw std::domain_error("imq_antiderivative: requires |u| < M");
    return imq_F(u, M);
}

double imq_truncation_entry(double eps, double L1, double H, const ABPair& ab)
{
    const double r2 = ab.r * ab.r;
    if (r2 >= H * H) return 0.0;
    const double S = std::sqrt(H * H - r2);
    if (ab.a == 0.0) {
        if (std::abs(ab.b) >= L1) return 0.0;
        const double inner = (L1 * L1 - ab.b * ab.b) / (1.0 + eps * eps * ab.b * ab.b);
        return 4.0 / eps * radonkit::asinh(eps * std::sqrt(inner)) * S;
    }
    const double aa = std::abs(ab.a);
    const double c1 = eps * std::max(-L1, ab.b - aa * S);
    const double c2 = eps * std::min(L1, ab.b + aa * S);
    if (c1 >= c2) return 0.0;
    const double M = eps * L1;
    return 2.0 / (eps * eps * aa) * (imq_F(c2, M) - imq_F(c1, M));
}

double wendland_compact_antiderivative(double u, double eps, double nu, const ABPair& ab)
{
    if (ab.a == 0.0) throw std::domain_error("wendland_compact_antiderivative: needs distinct angles");
    const double p = 1.0 - nu * nu * ab.r * ab.r;
    const double be = ab.b * eps;
    const double K2 = eps * eps * ab.a * ab.a;
    const double n2 = nu * nu;
    const double q1 = 6.0 * u * u - 15.0 * be * u + 10.0 * be * be;
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const double q2 = 20.0 / 3.0 * u5 - 16.0 * be * u4 + (10.0 * be * be + 19.0 / 3.0) * u3 - 14.0 / 3.0 * be * u2 +
                      (15.0 * be * be - 0.5) * u - 28.0 / 3.0 * be;
    const double w = std::sqrt(std::max(0.0, 1.0 - u * u));
    const double T = u == 0.0 ? 0.0 : u * u * u * radonkit::acosh(1.0 / std::min(1.0, std::abs(u)));
    return 0.5 * std::asin(u) * (p - n2 / K2 * (be * be + 0.1)) +
           w * (u * (u * u + 1.5) * p - n2 * q2 / (10.0 * K2) - 4.0 * n2 * be / (3.0 * K2) * (1.0 - u * u)) +
           T * (n2 * q1 / (5.0 * K2) - 2.0 * p);
}

double wendland_compact_entry(double eps, double nu, const ABPair& ab)
{
    const double nr2 = nu * nu * ab.r * ab.r;
    if (nr2 > 1.0) return 0.0;
    const double p = 1.0 - nr2;
    if (ab.a == 0.0) {
        // profile times the window's integral along the line, (4/3) p^{3/2} / nu
        return wendland_profile(eps, ab.b) * 4.0 / 3.0 * std::pow(p, 1.5) / nu;
    }
    const double aa = std::abs(ab.a);
    const double S = std::sqrt(std::max(0.0, 1.0 / (nu * nu) - ab.r * ab.r));
    const double be = ab.b * eps;
    const double c1 = std::max(-1.0, be - eps * aa * S);
    const double c2 = std::min(1.0, be + eps * aa * S);
    if (c1 >= c2) return 0.0;
    return (wendland_compact_antiderivative(c2, eps, nu, ab) - wendland_compact_antiderivative(c1, eps, nu, ab)) /
           (3.0 * eps * eps * aa);
}

double wendland_compact_entry(double eps, double nu, const LineParam& sample_k, const LineParam& sample_j)
{
    return wendland_compact_entry(eps, nu, ab_pair(sample_k, sample_j));
}

double mq_window_entry(const KernelModel& model, double nu, const ABPair& ab)
{
    const double eps = model.eps, rho = model.rho;
    const double C = nu * nu + eps * eps * ab.a * ab.a;
    const double n2 = nu * nu;
    const double ex = std::exp(1.0 / (eps * eps) - n2 * eps * eps * ab.b * ab.b / C - n2 * ab.r * ab.r);
    return kPi * ex / (2.0 * eps * std::sqrt(C)) *
           (1.0 / rho + rho / 2.0 * (ab.a * ab.a * C + 2.0 * ab.b * ab.b * n2 * n2) / (C * C));
}

double matrix_entry(const KernelModel& model, const WindowSpec& window, const LineParam& sample_k,
                    const LineParam& sample_j)
{
    const ABPair ab = ab_pair(sample_k, sample_j);
    if (window.family == WindowFamily::none || (window.mode == WindowMode::diagonal && ab.a != 0.0))
        return unwindowed_entry(model, ab);
    switch (model.family) {
    case KernelFamily::gaussian:
        if (window.family == WindowFamily::truncation) return gaussian_truncation_entry(model.eps, window.L, ab);
        if (window.family == WindowFamily::gaussian) return gaussian_window_entry(model.eps, window.nu, ab);
        break;
    case KernelFamily::imq:
        if (window.family == WindowFamily::truncation) return imq_truncation_entry(model.eps, model.L1, window.L, ab);
        break;
    case KernelFamily::mq:
        if (window.family == WindowFamily::gaussian) return mq_window_entry(model, window.nu, ab);
        break;
    case KernelFamily::wendland20:
        if (window.family == WindowFamily::compact) return wendland_compact_entry(model.eps, window.nu, ab);
        break;
    }
    check_compatible(model, window);
    throw std::invalid_argument("no closed form for this kernel/window pair");
}

namespace {

// half-width of the profile's support (or of its numerically relevant part)
double profile_reach(const KernelModel& model)
{
    switch (model.family) {
    case KernelFamily::gaussian: return 10.0 / model.eps;
    case KernelFamily::imq: return model.L1;
    case KernelFamily::mq: return 10.0 / model.eps;
    case KernelFamily::wendland20: return 1.0 / model.eps;
    }
    return 0.0;
}

}  // namespace

double oracle_entry(const KernelModel& model, const WindowSpec& window, const LineParam& sample_k,
                    const LineParam& sample_j, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("oracle_entry: tol must be positive");
    const ABPair ab = ab_pair(sample_k, sample_j);
    const bool unwindowed =
        window.family == WindowFamily::none || (window.mode == WindowMode::diagonal && ab.a != 0.0);
    if (unwindowed && ab.a == 0.0) throw NumericalError("unwindowed kernel entry is infinite for equal angles");

    // s-range allowed by the window
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    if (!unwindowed) {
        const double r2 = ab.r * ab.r;
        double S = 0.0;
        switch (window.family) {
        case WindowFamily::truncation:
            if (r2 >= window.L * window.L) return 0.0;
            S = std::sqrt(window.L * window.L - r2);
            break;
        case WindowFamily::compact:
            if (window.nu * window.nu * r2 >= 1.0) return 0.0;
            S = std::sqrt(1.0 / (window.nu * window.nu) - r2);
            break;
        case WindowFamily::gaussian:
            // tail beyond 10/nu is below e^-100 times the peak of the integrand
            S = 10.0 / window.nu;
            break;
        case WindowFamily::none:
            break;
        }
        lo = -S;
        hi = S;
    }

    const double reach = profile_reach(model);
    std::vector<double> bp;
    if (ab.a == 0.0) {
        if (std::abs(ab.b) > reach) return 0.0;
        bp = {lo, hi};
    } else {
        const double s_star = -ab.b / ab.a;
        const double w = reach / std::abs(ab.a);
        lo = std::max(lo, s_star - w);
        hi = std::min(hi, s_star + w);
        if (!(lo < hi)) return 0.0;
        bp.push_back(lo);
        // the profile peaks (or has a kink) at s_star; nested points resolve narrow peaks
        for (double frac : {-0.3, -0.1, -0.03, 0.0, 0.03, 0.1, 0.3}) {
            const double s = s_star + frac * w;
            if (s > lo && s < hi) bp.push_back(s);
        }
        bp.push_back(hi);
    }
    const double c = std::cos(sample_k.theta), sn = std::sin(sample_k.theta);
    auto f = [&](double s) {
        const Point x{ab.r * c - s * sn, ab.r * sn + s * c};
        const double u = ab.a * s + ab.b;
        const double wv = unwindowed ? 1.0 : window.eval(x);
        if (wv == 0.0) return 0.0;
        return basis_profile(model, u) * wv;
    };
    // large entries (wide compact windows) cannot be resolved to an absolute 1e-10
    const QuadratureResult q = adaptive_quadrature(f, bp, tol, kQuadraturePanelBudget, 1e-13);
    if (!q.converged) throw NumericalError("oracle_entry: quadrature did not reach the requested tolerance");
    return q.value;
}

}  // namespace radonkit
