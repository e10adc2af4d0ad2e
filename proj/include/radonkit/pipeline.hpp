#pragma once

#include "radonkit/art.hpp"
#include "radonkit/fbp.hpp"
#include "radonkit/kernelrec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace radonkit {

enum class Algorithm { fbp, art, kernel };
std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct ReconConfig {
    std::string phantom = "crescent";
    std::string sinogram_path;  // when set, data come from this file instead of the phantom
    bool scattered = false;
    int N = 18;
    int M = 20;
    double d = 0.05;
    std::size_t n_scattered = 738;
    std::uint64_t seed = 1;
    NoiseSpec noise;
    int K = 64;

    Algorithm algorithm = Algorithm::fbp;
    FbpConfig fbp;
    ArtConfig art;
    KernelModel kernel;
    WindowSpec window;
    double h = 1.0;

    SampleSet samples() const;
};

struct ReconResult {
    ImageGrid image;
    std::optional<ImageGrid> reference;
    std::optional<double> rmse;
    std::optional<double> rcond;
    std::vector<std::pair<std::string, std::string>> info;  // algorithm-specific facts
    double seconds = 0.0;
};

// Sinogram for a configuration: read from file or sampled from the phantom, then noised.
Sinogram make_sinogram(const ReconConfig& cfg);
ReconResult run_reconstruction(const ReconConfig& cfg);

using Report = std::vector<std::pair<std::string, std::string>>;
Report config_fields(const ReconConfig& cfg);
void write_report(const std::string& path, const Report& fields);
Report read_report(const std::string& path);

struct SweepSpec {
    std::string param;  // eps | nu | rho | L | L2 | h | lambda
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    std::string metric = "rmse";  // rmse | rcond | time
    ReconConfig base;

    std::vector<double> grid() const;
    void validate() const;
};

struct SweepRow {
    double value = 0.0;
    double metric = 0.0;
    double rmse = 0.0;
    double rcond = 0.0;
    double seconds = 0.0;
    bool ok = true;
    std::string error;
};

void apply_parameter(ReconConfig& cfg, const std::string& param, double value);
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
std::string sweep_to_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace radonkit
