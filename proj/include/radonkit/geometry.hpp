#pragma once

#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace radonkit {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

struct LineParam {
    double t = 0.0;
    double theta = 0.0;  // in [0, pi)
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class Layout { parallel, scattered };

struct SampleSet {
    std::vector<LineParam> samples;
    Layout layout = Layout::scattered;
    // parallel-beam parameters, meaningful when layout == parallel
    int N = 0;
    int M = 0;
    double d = 0.0;

    std::size_t size() const { return samples.size(); }
    const LineParam& operator[](std::size_t i) const { return samples[i]; }
    // angle of index l on the parallel grid
    double angle(int l) const;
};

Point line_point(const LineParam& line, double s);
// returns (t, s)
std::pair<double, double> line_coordinates(const Point& p, double theta);

// theta_l = l*pi/N, with l = 0 and 2l = N mapped to the exact constants 0 and pi/2.
double grid_angle(int l, int N);

SampleSet parallel_beam_samples(int N, int M, double d);
SampleSet scattered_samples(std::size_t n, std::uint64_t seed);

// Counter-based generator: output i is splitmix64(seed + i * golden gamma).
class CounterRng {
public:
    using result_type = std::uint64_t;
    explicit CounterRng(std::uint64_t seed) : state_(seed) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()();
    // uniform on [0, 1) with 53 random bits
    double uniform();

private:
    std::uint64_t state_;
};

}  // namespace radonkit
