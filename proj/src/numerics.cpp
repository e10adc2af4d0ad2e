#include "radonkit/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <queue>
#include <thread>

namespace radonkit {

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

double asinh(double x) { return std::asinh(x); }

double acosh(double x)
{
    if (!(x >= 1.0)) throw std::domain_error("acosh: argument below 1");
    return std::acosh(x);
}

namespace {

constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * wgk[7];
    double resg = fc * wg[3];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const double s = fv1[j] + fv2[j];
        resk += wgk[j] * s;
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    const double ah = std::abs(h);
    resk *= h;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg * h));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk, err};
}

}  // namespace

QuadratureResult adaptive_quadrature(const Integrand& f, const std::vector<double>& bp, double tol,
                                     int max_panels, double rel_tol)
{
    if (bp.size() < 2) throw std::invalid_argument("adaptive_quadrature: need two bounds");
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quadrature: tol must be positive");
    std::priority_queue<Panel> heap;
    std::vector<Panel> done;
    double total_err = 0.0, total = 0.0;
    int panels = 0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (bp[i + 1] < bp[i]) throw std::invalid_argument("adaptive_quadrature: unsorted breakpoints");
        if (bp[i + 1] == bp[i]) continue;
        Panel p = gk15(f, bp[i], bp[i + 1]);
        total_err += p.error;
        total += p.value;
        heap.push(p);
        ++panels;
    }
    auto target = [&] { return std::max(tol, rel_tol * std::abs(total)); };
    while (!heap.empty() && total_err > target() && panels < max_panels) {
        Panel p = heap.top();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            // cannot split further; keep the panel as is
            heap.pop();
            done.push_back(p);
            continue;
        }
        heap.pop();
        Panel left = gk15(f, p.a, mid);
        Panel right = gk15(f, mid, p.b);
        total_err += left.error + right.error - p.error;
        total += left.value + right.value - p.value;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    QuadratureResult r;
    double err = 0.0;
    for (const Panel& p : done) {
        r.value += p.value;
        err += p.error;
    }
    r.error = err;
    r.subdivisions = panels;
    r.converged = err <= std::max(tol, rel_tol * std::abs(r.value));
    return r;
}

QuadratureResult adaptive_quadrature(const Integrand& f, double a, double b, double tol, int max_panels,
                                     double rel_tol)
{
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0, 0, true};
        QuadratureResult r = adaptive_quadrature(f, std::vector<double>{b, a}, tol, max_panels, rel_tol);
        r.value = -r.value;
        return r;
    }
    return adaptive_quadrature(f, std::vector<double>{a, b}, tol, max_panels, rel_tol);
}

double integrate(const Integrand& f, double a, double b, double tol)
{
    QuadratureResult r = adaptive_quadrature(f, a, b, tol);
    if (!r.converged) throw NumericalError("quadrature did not converge within the panel budget");
    return r.value;
}

double integrate(const Integrand& f, const std::vector<double>& breakpoints, double tol)
{
    QuadratureResult r = adaptive_quadrature(f, breakpoints, tol);
    if (!r.converged) throw NumericalError("quadrature did not converge within the panel budget");
    return r.value;
}

double integrate_gk31(const Integrand& f, double a, double b, double tol)
{
    if (a == b) return 0.0;
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &err);
    return v;
}

namespace {

bool lu_singular(const Eigen::PartialPivLU<Matrix>& lu)
{
    const auto& m = lu.matrixLU();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double d = m(i, i);
        if (d == 0.0 || !std::isfinite(d)) return true;
    }
    return false;
}

double inverse_norm1_estimate(const Eigen::PartialPivLU<Matrix>& lu, Eigen::Index n)
{
    Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    Eigen::Index last_j = -1;
    for (int iter = 0; iter < 5; ++iter) {
        Vector y = lu.solve(x);
        est = std::max(est, y.lpNorm<1>());
        Vector xi(n);
        for (Eigen::Index i = 0; i < n; ++i) xi(i) = y(i) >= 0.0 ? 1.0 : -1.0;
        Vector z = lu.transpose().solve(xi);
        Eigen::Index j = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&j);
        if (iter > 0 && (zmax <= z.dot(x) || j == last_j)) break;
        last_j = j;
        x.setZero();
        x(j) = 1.0;
    }
    // alternating-sign probe catches matrices where the power iteration stalls
    Vector alt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        alt(i) = sign * (1.0 + (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0));
    }
    Vector y = lu.solve(alt);
    est = std::max(est, 2.0 * y.lpNorm<1>() / (3.0 * static_cast<double>(n)));
    return est;
}

double matrix_norm1(const Matrix& A)
{
    return A.cwiseAbs().colwise().sum().maxCoeff();
}

double rcond_from_lu(const Matrix& A, const Eigen::PartialPivLU<Matrix>& lu)
{
    if (A.rows() == 0) return 1.0;
    if (lu_singular(lu)) return 0.0;
    const double anorm = matrix_norm1(A);
    if (anorm == 0.0) return 0.0;
    const double inv = inverse_norm1_estimate(lu, A.rows());
    if (!std::isfinite(inv) || inv == 0.0) return 0.0;
    return 1.0 / (anorm * inv);
}

}  // namespace

DenseSolveResult dense_solve(const Matrix& A, const Vector& b)
{
    if (A.rows() != A.cols()) throw std::invalid_argument("dense_solve: matrix not square");
    if (b.size() != A.rows()) throw std::invalid_argument("dense_solve: size mismatch");
    if (!A.allFinite() || !b.allFinite()) throw std::invalid_argument("dense_solve: non-finite input");
    DenseSolveResult out;
    if (A.rows() == 0) {
        out.rcond = 1.0;
        return out;
    }
    Eigen::PartialPivLU<Matrix> lu(A);
    out.rcond = rcond_from_lu(A, lu);
    if (lu_singular(lu)) throw NumericalError("dense_solve: matrix is singular to working precision");
    out.x = lu.solve(b);
    Vector r = b - A * out.x;
    out.x += lu.solve(r);
    if (!out.x.allFinite())
        throw NumericalError("dense_solve: matrix is singular to working precision (rcond " +
                             std::to_string(out.rcond) + ")");
    return out;
}

double rcond_1norm(const Matrix& A)
{
    if (A.rows() != A.cols()) throw std::invalid_argument("rcond_1norm: matrix not square");
    if (A.rows() == 0) return 1.0;
    Eigen::PartialPivLU<Matrix> lu(A);
    return rcond_from_lu(A, lu);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f)
{
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (n < 2 || workers == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::mutex m;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!failure) failure = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace radonkit
