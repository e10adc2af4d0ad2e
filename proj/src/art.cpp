#include "radonkit/art.hpp"

#include "radonkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radonkit {

void SparseSystem::add_row(const std::vector<std::pair<std::size_t, double>>& entries)
{
    for (const auto& [c, v] : entries) {
        col_idx.push_back(c);
        vals.push_back(v);
    }
    row_ptr.push_back(col_idx.size());
    ++rows;
}

double SparseSystem::row_dot(std::size_t r, const std::vector<double>& x) const
{
    double sum = 0.0;
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) sum += vals[p] * x[col_idx[p]];
    return sum;
}

std::vector<double> SparseSystem::multiply(const std::vector<double>& x) const
{
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) y[r] = row_dot(r, x);
    return y;
}

double SparseSystem::residual_norm(const std::vector<double>& x) const
{
    double sum = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double d = row_dot(r, x) - rhs[r];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double pixel_radon(std::size_t index, int K, const LineParam& line)
{
    PixelGrid grid(K);
    const std::size_t count = static_cast<std::size_t>(K) * static_cast<std::size_t>(K);
    if (index >= count) throw std::out_of_range("pixel_radon: pixel index out of range");
    const int row = static_cast<int>(index / K);
    const int col = static_cast<int>(index % K);
    const double w = grid.width();
    const double x0 = grid.left(col), x1 = x0 + w;
    const double y1 = grid.top(row), y0 = y1 - w;
    const double t = line.t;

    if (line.theta == 0.0) {
        if ((x0 <= t && t < x1) || (col == K - 1 && t == x1)) return w;
        return 0.0;
    }
    if (line.theta == kHalfPi) {
        if ((y0 < t && t <= y1) || (row == K - 1 && t == y0)) return w;
        return 0.0;
    }
    const double c = std::cos(line.theta);
    const double s = std::sin(line.theta);
    double th[4] = {x0 * c + y0 * s, x1 * c + y0 * s, x0 * c + y1 * s, x1 * c + y1 * s};
    std::sort(th, th + 4);
    const double tmin = th[0], tmin2 = th[1], tmax2 = th[2], tmax = th[3];
    const double sc = std::abs(s * c);
    const double r2 = w * std::min(1.0 / std::abs(c), 1.0 / std::abs(s));
    if (sc < 1e-14) {
        if (tmin2 <= t && t <= tmax2) return r2;
        return 0.0;
    }
    if (tmin < t && t < tmin2) return (t - tmin) / sc;
    if (tmin2 <= t && t <= tmax2) return r2;
    if (tmax2 < t && t < tmax) return (tmax - t) / sc;
    return 0.0;
}

SparseSystem assemble_system(const SampleSet& s, int K)
{
    PixelGrid grid(K);
    const std::size_t J = s.size();
    const std::size_t count = static_cast<std::size_t>(K) * static_cast<std::size_t>(K);
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(J);
    const double half_diag = grid.width() * std::sqrt(2.0) / 2.0;
    parallel_for(J, [&](std::size_t j) {
        const LineParam& line = s[j];
        const double c = std::cos(line.theta), sn = std::sin(line.theta);
        auto& out = rows[j];
        for (std::size_t i = 0; i < count; ++i) {
            const Point p = grid.center(i);
            if (std::abs(p.x * c + p.y * sn - line.t) > half_diag * 1.0000001) continue;
            const double v = pixel_radon(i, K, line);
            if (v != 0.0) out.emplace_back(i, v);
        }
    });
    SparseSystem sys;
    sys.cols = count;
    for (const auto& r : rows) sys.add_row(r);
    sys.rhs.assign(J, 0.0);
    return sys;
}

void KaczmarzConfig::validate() const
{
    if (!(lambda > 0.0 && lambda < 2.0)) throw std::invalid_argument("kaczmarz: relaxation must lie in (0, 2)");
    if (max_sweeps < 0) throw std::invalid_argument("kaczmarz: sweep count must be non-negative");
}

void kaczmarz_project(const SparseSystem& sys, std::size_t r, double lambda, std::vector<double>& x)
{
    double norm2 = 0.0;
    for (std::size_t p = sys.row_ptr[r]; p < sys.row_ptr[r + 1]; ++p) norm2 += sys.vals[p] * sys.vals[p];
    if (norm2 == 0.0) return;
    const double step = lambda * (sys.row_dot(r, x) - sys.rhs[r]) / norm2;
    for (std::size_t p = sys.row_ptr[r]; p < sys.row_ptr[r + 1]; ++p) x[sys.col_idx[p]] -= step * sys.vals[p];
}

KaczmarzResult kaczmarz_solve(const SparseSystem& sys, const KaczmarzConfig& cfg)
{
    cfg.validate();
    if (sys.rhs.size() != sys.rows) throw std::invalid_argument("kaczmarz: rhs size mismatch");
    KaczmarzResult res;
    if (cfg.initial.empty()) {
        res.x.assign(sys.cols, 0.0);
    } else {
        if (cfg.initial.size() != sys.cols) throw std::invalid_argument("kaczmarz: initial guess size mismatch");
        res.x = cfg.initial;
    }
    if (sys.residual_norm(res.x) <= cfg.tol) {
        res.converged = true;
        return res;
    }
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        for (std::size_t r = 0; r < sys.rows; ++r) kaczmarz_project(sys, r, cfg.lambda, res.x);
        const double rn = sys.residual_norm(res.x);
        res.residual_history.push_back(rn);
        res.sweeps = sweep + 1;
        if (rn <= cfg.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

LeastSquaresResult least_squares_solve(const SparseSystem& sys)
{
    const Eigen::Index n = static_cast<Eigen::Index>(sys.cols);
    Eigen::MatrixXd AtA = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd Atp = Eigen::VectorXd::Zero(n);
    for (std::size_t r = 0; r < sys.rows; ++r) {
        for (std::size_t p = sys.row_ptr[r]; p < sys.row_ptr[r + 1]; ++p) {
            const auto i = static_cast<Eigen::Index>(sys.col_idx[p]);
            Atp(i) += sys.vals[p] * sys.rhs[r];
            for (std::size_t q = sys.row_ptr[r]; q < sys.row_ptr[r + 1]; ++q)
                AtA(i, static_cast<Eigen::Index>(sys.col_idx[q])) += sys.vals[p] * sys.vals[q];
        }
    }
    LeastSquaresResult res;
    const double trace = AtA.trace();
    const double damping = n > 0 ? 1e-10 * trace / static_cast<double>(n) : 0.0;
    if (trace == 0.0) {
        res.x.assign(sys.cols, 0.0);
        res.rank_deficient = true;
        res.residual = sys.residual_norm(res.x);
        return res;
    }
    AtA.diagonal().array() += damping;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(AtA);
    if (ldlt.info() != Eigen::Success) throw NumericalError("least squares: factorization failed");
    const Eigen::VectorXd x = ldlt.solve(Atp);
    // a pivot that is not clearly above the damping means a direction the data do not determine
    res.rank_deficient = ldlt.vectorD().minCoeff() <= 10.0 * damping;
    res.x.assign(x.data(), x.data() + x.size());
    res.residual = sys.residual_norm(res.x);
    return res;
}

ArtResult reconstruct_art(const Sinogram& sino, int K, const ArtConfig& cfg)
{
    SparseSystem sys = assemble_system(sino.samples, K);
    sys.rhs = sino.values;
    ArtResult out;
    std::vector<double> x;
    const bool use_kaczmarz = cfg.method == ArtMethod::kaczmarz ||
                              (cfg.method == ArtMethod::automatic && sys.rows < sys.cols);
    if (use_kaczmarz) {
        KaczmarzResult r = kaczmarz_solve(sys, cfg.kaczmarz);
        x = std::move(r.x);
        out.used = ArtMethod::kaczmarz;
        out.sweeps = r.sweeps;
        out.residual = sys.residual_norm(x);
    } else {
        LeastSquaresResult r = least_squares_solve(sys);
        x = std::move(r.x);
        out.used = ArtMethod::lsq;
        out.residual = r.residual;
        out.rank_deficient = r.rank_deficient;
    }
    out.image = ImageGrid(K);
    out.image.values = std::move(x);
    return out;
}

}  // namespace radonkit
