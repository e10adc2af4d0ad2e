#include "radonkit/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace radonkit {

Point line_point(const LineParam& line, double s)
{
    const double c = std::cos(line.theta);
    const double sn = std::sin(line.theta);
    return {line.t * c - s * sn, line.t * sn + s * c};
}

std::pair<double, double> line_coordinates(const Point& p, double theta)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {p.x * c + p.y * s, -p.x * s + p.y * c};
}

double grid_angle(int l, int N)
{
    if (l == 0) return 0.0;
    if (2 * l == N) return kHalfPi;
    return static_cast<double>(l) * kPi / static_cast<double>(N);
}

double SampleSet::angle(int l) const { return grid_angle(l, N); }

SampleSet parallel_beam_samples(int N, int M, double d)
{
    if (N < 1) throw std::invalid_argument("parallel_beam_samples: N must be at least 1");
    if (M < 0) throw std::invalid_argument("parallel_beam_samples: M must be non-negative");
    if (!(d > 0.0)) throw std::invalid_argument("parallel_beam_samples: spacing must be positive");
    SampleSet s;
    s.layout = Layout::parallel;
    s.N = N;
    s.M = M;
    s.d = d;
    s.samples.reserve(static_cast<std::size_t>(N) * static_cast<std::size_t>(2 * M + 1));
    for (int l = 0; l < N; ++l) {
        const double theta = grid_angle(l, N);
        for (int k = -M; k <= M; ++k) s.samples.push_back({k * d, theta});
    }
    return s;
}

SampleSet scattered_samples(std::size_t n, std::uint64_t seed)
{
    if (n == 0) throw std::invalid_argument("scattered_samples: n must be at least 1");
    SampleSet s;
    s.layout = Layout::scattered;
    s.samples.reserve(n);
    CounterRng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * rng.uniform() - 1.0;
        double theta = kPi * rng.uniform();
        if (theta >= kPi) theta = 0.0;
        s.samples.push_back({t, theta});
    }
    return s;
}

CounterRng::result_type CounterRng::operator()()
{
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform()
{
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace radonkit
