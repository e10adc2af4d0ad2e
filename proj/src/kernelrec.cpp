#include "radonkit/kernelrec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace radonkit {

std::vector<std::pair<LineParam, LineParam>> audit_probes()
{
    const double angles[5] = {0.0, kPi / 5.0, 2.0 * kPi / 5.0, kHalfPi, 3.0 * kPi / 4.0};
    CounterRng rng(20240601);
    std::vector<std::pair<LineParam, LineParam>> probes;
    for (int i = 0; i < 25; ++i) {
        LineParam k{1.8 * rng.uniform() - 0.9, angles[i % 5]};
        LineParam j;
        if (i % 3 == 0) {
            // equal angles, offsets close enough that narrow kernels still overlap
            j = {k.t + 0.1 * rng.uniform() - 0.05, k.theta};
        } else {
            j = {1.8 * rng.uniform() - 0.9, angles[(i % 5 + 1 + i % 4) % 5]};
            if (j.theta == k.theta) j.theta = angles[(i % 5 + 2) % 5];
        }
        probes.emplace_back(k, j);
    }
    return probes;
}

AuditResult audit_entries(const KernelModel& model, const WindowSpec& window)
{
    check_compatible(model, window);
    AuditResult res;
    res.family = to_string(model.family) + "+" + to_string(window.family) + "/" + to_string(window.mode);
    double max_diff = 0.0, scale = 0.0;
    bool failed = false;
    for (const auto& [k, j] : audit_probes()) {
        const ABPair ab = ab_pair(k, j);
        if (window.family == WindowFamily::none && ab.a == 0.0) continue;
        double closed = 0.0;
        try {
            closed = matrix_entry(model, window, k, j);
        } catch (const std::exception&) {
            failed = true;
            continue;
        }
        const double tol = 1e-12 * std::max(1.0, std::abs(closed));
        const double oracle = oracle_entry(model, window, k, j, tol);
        if (!std::isfinite(closed)) failed = true;
        max_diff = std::max(max_diff, std::abs(closed - oracle));
        scale = std::max(scale, std::abs(oracle));
    }
    res.max_deviation = failed ? std::numeric_limits<double>::infinity()
                               : (scale > 0.0 ? max_diff / scale : max_diff);
    res.route = res.max_deviation <= kAuditThreshold ? EntryRoute::closed_form : EntryRoute::oracle_fallback;
    return res;
}

KernelSystem assemble_kernel_system(const KernelModel& model, const WindowSpec& window, const SampleSet& s,
                                    const Sinogram& sino, double h, const Phantom* reference)
{
    check_compatible(model, window);
    if (!(h > 0.0)) throw std::invalid_argument("scale h must be positive");
    if (sino.values.size() != s.size()) throw std::invalid_argument("sinogram does not match the sample set");
    if (h != 1.0 && reference == nullptr)
        throw std::invalid_argument("scaled problem (h != 1) needs the analytic phantom");
    if (model.family == KernelFamily::imq) {
        double tmax = 0.0;
        for (const auto& l : s.samples) tmax = std::max(tmax, std::abs(h * l.t));
        if (!(model.L1 > 2.0 * tmax)) throw std::invalid_argument("imq: L1 must exceed twice the largest offset");
    }

    KernelSystem sys;
    sys.h = h;
    sys.audit = audit_entries(model, window);
    const std::size_t n = s.size();
    std::vector<LineParam> scaled(s.samples);
    if (h != 1.0)
        for (auto& l : scaled) l.t *= h;

    sys.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const bool closed = sys.audit.route == EntryRoute::closed_form;
    const double inv_h2 = 1.0 / (h * h);
    parallel_for(n, [&](std::size_t k) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = closed ? matrix_entry(model, window, scaled[k], scaled[j])
                              : oracle_entry(model, window, scaled[k], scaled[j], 1e-10);
            if (h != 1.0) v *= inv_h2;
            sys.A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
        }
    });
    if (!sys.A.allFinite()) throw NumericalError("kernel matrix has non-finite entries");

    sys.rhs.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        sys.rhs(static_cast<Eigen::Index>(k)) =
            h == 1.0 ? sino.values[k] : radon_scaled(*reference, h, s.samples[k]);
    }
    sys.rcond = rcond_1norm(sys.A);
    return sys;
}

KernelSolution solve_and_evaluate(const KernelSystem& sys, const KernelModel& model, const SampleSet& s, int K)
{
    if (static_cast<std::size_t>(sys.A.rows()) != s.size())
        throw std::invalid_argument("kernel system does not match the sample set");
    const DenseSolveResult sol = dense_solve(sys.A, sys.rhs);
    KernelSolution out;
    out.coefficients = sol.x;
    out.residual_inf = (sys.A * sol.x - sys.rhs).lpNorm<Eigen::Infinity>();

    const double h = sys.h;
    std::vector<LineParam> scaled(s.samples);
    if (h != 1.0)
        for (auto& l : scaled) l.t *= h;
    std::vector<double> cs(scaled.size()), sn(scaled.size());
    for (std::size_t j = 0; j < scaled.size(); ++j) {
        cs[j] = std::cos(scaled[j].theta);
        sn[j] = std::sin(scaled[j].theta);
    }
    PixelGrid grid(K);
    out.image = ImageGrid(K);
    parallel_for(static_cast<std::size_t>(K) * K, [&](std::size_t i) {
        const Point p = grid.center(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < scaled.size(); ++j) {
            const double c = sol.x(static_cast<Eigen::Index>(j));
            if (c == 0.0) continue;
            sum += c * basis_profile(model, scaled[j].t - (p.x * cs[j] + p.y * sn[j]));
        }
        out.image.values[i] = h == 1.0 ? sum : sum / h;
    });
    return out;
}

}  // namespace radonkit
