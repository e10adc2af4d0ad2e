#pragma once

#include "radonkit/geometry.hpp"
#include "radonkit/image.hpp"
#include "radonkit/numerics.hpp"
#include "radonkit/phantom.hpp"
#include "radonkit/sinogram.hpp"

#include <optional>
#include <string>
#include <vector>

namespace radonkit {

enum class KernelFamily { gaussian, imq, mq, wendland20 };

struct KernelModel {
    KernelFamily family = KernelFamily::gaussian;
    double eps = 30.0;
    double rho = 1.0;  // mq
    double L1 = 20.0;  // imq inner truncation radius

    static KernelModel defaults(KernelFamily f);
    void validate() const;
};

enum class WindowFamily { none, truncation, gaussian, compact };
enum class WindowMode { all, diagonal };

// none: plain Radon transform, finite only for entries with distinct angles.
struct WindowSpec {
    WindowFamily family = WindowFamily::gaussian;
    double L = 20.0;  // truncation radius
    double nu = 0.5;  // gaussian / compact parameter
    WindowMode mode = WindowMode::all;

    // default window for each kernel family
    static WindowSpec defaults(KernelFamily f);
    double eval(const Point& p) const;
    void validate() const;
};

KernelFamily parse_kernel_family(const std::string& name);
WindowFamily parse_window_family(const std::string& name);
WindowMode parse_window_mode(const std::string& name);
std::string to_string(KernelFamily f);
std::string to_string(WindowFamily f);
std::string to_string(WindowMode m);

// Throws std::invalid_argument for pairings without a closed form.
void check_compatible(const KernelModel& model, const WindowSpec& window);

struct ABPair {
    double a = 0.0;  // sin(theta_k - theta_j)
    double b = 0.0;  // t_j - t_k cos(theta_k - theta_j)
    double r = 0.0;  // t_k
};

// a is exactly 0 when the angles are equal, or |sin| < 1e-12 (snapped to the nearest exact angle)
ABPair ab_pair(const LineParam& sample_k, const LineParam& sample_j);

// Radon transform of the kernel along l_j as a function of the offset t_j - x.v_j
double basis_profile(const KernelModel& model, double u);
double basis_eval(const KernelModel& model, const LineParam& sample_j, const Point& x);

// Closed-form matrix entries. matrix_entry dispatches on the family; the
// per-family functions are exposed for the audit.
double matrix_entry(const KernelModel& model, const WindowSpec& window, const LineParam& sample_k,
                    const LineParam& sample_j);
double gaussian_truncation_entry(double eps, double L, const ABPair& ab);
double gaussian_window_entry(double eps, double nu, const ABPair& ab);
double gaussian_unwindowed_entry(double eps, const ABPair& ab);
double imq_truncation_entry(double eps, double L1, double H, const ABPair& ab);
double imq_antiderivative(double u, double M);
double wendland_compact_entry(double eps, double nu, const LineParam& sample_k, const LineParam& sample_j);
double wendland_compact_entry(double eps, double nu, const ABPair& ab);
// antiderivative in u = eps (b + |a| s); defined for |u| <= 1 and a != 0
double wendland_compact_antiderivative(double u, double eps, double nu, const ABPair& ab);
// closed-form multiquadric basis and Gaussian-window entry; both fail the audit
double mq_basis_closed_form(const KernelModel& model, double u);
double mq_window_entry(const KernelModel& model, double nu, const ABPair& ab);

// Adaptive quadrature along l_k of basis_j times the window; absolute tolerance tol.
double oracle_entry(const KernelModel& model, const WindowSpec& window, const LineParam& sample_k,
                    const LineParam& sample_j, double tol);

enum class EntryRoute { closed_form, oracle_fallback };
std::string to_string(EntryRoute r);

struct AuditResult {
    std::string family;  // e.g. "gaussian+gauss/all"
    double max_deviation = 0.0;  // relative to the largest probe magnitude
    EntryRoute route = EntryRoute::closed_form;
};

// Probe pairs used by the audit: mixed equal/distinct angles.
std::vector<std::pair<LineParam, LineParam>> audit_probes();

// Compares matrix_entry against oracle_entry on the probes. Closed forms that
// deviate by more than kAuditThreshold are routed to the oracle.
constexpr double kAuditThreshold = 1e-6;
AuditResult audit_entries(const KernelModel& model, const WindowSpec& window);

struct KernelSystem {
    Matrix A;
    Vector rhs;
    double h = 1.0;
    double rcond = 0.0;
    AuditResult audit;
};

// For h != 1 the right-hand side is computed from `reference` analytically.
KernelSystem assemble_kernel_system(const KernelModel& model, const WindowSpec& window, const SampleSet& s,
                                    const Sinogram& sino, double h = 1.0,
                                    const Phantom* reference = nullptr);

struct KernelSolution {
    ImageGrid image;
    Vector coefficients;
    double residual_inf = 0.0;  // ||A c - f||_inf
};

KernelSolution solve_and_evaluate(const KernelSystem& sys, const KernelModel& model, const SampleSet& s, int K);

}  // namespace radonkit
