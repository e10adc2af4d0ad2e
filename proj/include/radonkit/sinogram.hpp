#pragma once

#include "radonkit/geometry.hpp"
#include "radonkit/phantom.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace radonkit {

struct NoiseSpec {
    enum class Kind { none, gaussian, poisson, saltpepper };
    Kind kind = Kind::none;
    double mean = 0.0;
    double variance = 0.0;
    double scale = 1000.0;
    double density = 0.0;
    std::optional<double> amplitude;  // salt-pepper; defaults to the data maximum
    std::uint64_t seed = 0;

    static NoiseSpec none() { return {}; }
    static NoiseSpec gaussian(double mean, double variance, std::uint64_t seed);
    static NoiseSpec poisson(double scale, std::uint64_t seed);
    static NoiseSpec saltpepper(double density, std::optional<double> amplitude, std::uint64_t seed);

    // "none", "gaussian:MEAN,VAR", "poisson:SCALE", "saltpepper:DENSITY[,AMP]"
    static NoiseSpec parse(const std::string& text, std::uint64_t seed);
    std::string to_string() const;
    void validate() const;
};

struct Provenance {
    std::string phantom;  // empty when unknown
    std::string noise = "none";
};

struct Sinogram {
    SampleSet samples;
    std::vector<double> values;
    Provenance provenance;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

Sinogram sample(const Phantom& ph, const SampleSet& s);
Sinogram add_noise(const Sinogram& sino, const NoiseSpec& spec);

std::string write_csv(const Sinogram& sino);
Sinogram read_csv(const std::string& text);
void save_sinogram(const Sinogram& sino, const std::string& path);
Sinogram load_sinogram(const std::string& path);

}  // namespace radonkit
