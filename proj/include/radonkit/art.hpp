#pragma once

#include "radonkit/image.hpp"
#include "radonkit/sinogram.hpp"

#include <vector>

namespace radonkit {

// Row-compressed sparse matrix with rhs.
struct SparseSystem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::size_t> col_idx;
    std::vector<double> vals;
    std::vector<double> rhs;

    void add_row(const std::vector<std::pair<std::size_t, double>>& entries);
    double row_dot(std::size_t r, const std::vector<double>& x) const;
    std::vector<double> multiply(const std::vector<double>& x) const;
    double residual_norm(const std::vector<double>& x) const;
};

// Chord length of line inside pixel `index` (0-based, row-major top-down).
double pixel_radon(std::size_t index, int K, const LineParam& line);

SparseSystem assemble_system(const SampleSet& s, int K);

struct KaczmarzConfig {
    double lambda = 1.0;
    int max_sweeps = 50;
    double tol = 1e-10;
    std::vector<double> initial;  // empty means zero vector
    void validate() const;
};

struct KaczmarzResult {
    std::vector<double> x;
    std::vector<double> residual_history;  // ||Ax - p|| after each sweep
    int sweeps = 0;
    bool converged = false;
};

KaczmarzResult kaczmarz_solve(const SparseSystem& sys, const KaczmarzConfig& cfg);

// One relaxed projection of x onto the hyperplane of row r.
void kaczmarz_project(const SparseSystem& sys, std::size_t r, double lambda, std::vector<double>& x);

struct LeastSquaresResult {
    std::vector<double> x;
    double residual = 0.0;
    bool rank_deficient = false;
};

LeastSquaresResult least_squares_solve(const SparseSystem& sys);

enum class ArtMethod { automatic, kaczmarz, lsq };

struct ArtConfig {
    ArtMethod method = ArtMethod::automatic;
    KaczmarzConfig kaczmarz;
};

struct ArtResult {
    ImageGrid image;
    ArtMethod used = ArtMethod::kaczmarz;
    double residual = 0.0;
    int sweeps = 0;
    bool rank_deficient = false;
};

ArtResult reconstruct_art(const Sinogram& sino, int K, const ArtConfig& cfg);

}  // namespace radonkit
