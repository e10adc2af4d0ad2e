#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

namespace radonkit {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double erf(double x);
double erfc(double x);
double asinh(double x);
// throws std::domain_error for x < 1
double acosh(double x);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

constexpr int kQuadraturePanelBudget = 10000;

// Global adaptive Gauss-Kronrod 15/7. Stops once the error estimate is below
// max(tol, rel_tol * |value|).
QuadratureResult adaptive_quadrature(const Integrand& f, double a, double b, double tol,
                                     int max_panels = kQuadraturePanelBudget, double rel_tol = 0.0);

// Same rule, started from the panels [p0,p1], [p1,p2], ... so that known kinks
// and jumps sit on panel edges. Breakpoints must be non-decreasing.
QuadratureResult adaptive_quadrature(const Integrand& f, const std::vector<double>& breakpoints,
                                     double tol, int max_panels = kQuadraturePanelBudget,
                                     double rel_tol = 0.0);

// Throws NumericalError when the panel budget is exhausted.
double integrate(const Integrand& f, double a, double b, double tol);
double integrate(const Integrand& f, const std::vector<double>& breakpoints, double tol);

// Independent second rule (recursive Gauss-Kronrod 31/15 from Boost), used to
// cross-check the primary quadrature. tol is relative, recursion depth 15.
double integrate_gk31(const Integrand& f, double a, double b, double tol);

struct DenseSolveResult {
    Vector x;
    double rcond = 0.0;
};

// LU with partial pivoting plus one refinement step.
DenseSolveResult dense_solve(const Matrix& A, const Vector& b);

double rcond_1norm(const Matrix& A);

// Run f(i) for i in [0, n) on a fixed pool of threads. Each index is handled
// exactly once, so results stored per index do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace radonkit
