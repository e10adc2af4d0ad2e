#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "radonkit/fbp.hpp"

#include <cmath>
#include <random>

using namespace radonkit;

namespace {

// (1/2pi) int_{-L}^{L} A(w) e^{iwx} dw for an even filter
double ift_oracle(FilterFamily fam, double L, double x)
{
    auto A = [&](double w) {
        switch (fam) {
        case FilterFamily::ram_lak: return w;
        case FilterFamily::shepp_logan: return 2.0 * L / kPi * std::sin(kPi * w / (2.0 * L));
        case FilterFamily::cosine: return w * std::cos(kPi * w / (2.0 * L));
        }
        return 0.0;
    };
    return oracle::simpson([&](double w) { return A(w) * std::cos(w * x); }, 0.0, L, 20000) / kPi;
}

DiscreteSignal random_signal(std::mt19937_64& gen, int first, int len)
{
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    DiscreteSignal s;
    s.first = first;
    s.d = 0.1;
    for (int i = 0; i < len; ++i) s.values.push_back(U(gen));
    return s;
}

double brute(const DiscreteSignal& f, const DiscreteSignal& g, int m)
{
    double sum = 0.0;
    for (int j = f.first - 5; j <= f.last() + 5; ++j) sum += f[j] * g[m - j];
    return sum;
}

}  // namespace

TEST_CASE("sampled filter values")
{
    const FilterSpec sl{FilterFamily::shepp_logan, 10.0};
    const double pi3 = kPi * kPi * kPi;
    CHECK(std::abs(filter_sampled_ift(sl, 0) - 400.0 / pi3) <= 1e-12);
    CHECK(std::abs(filter_sampled_ift(sl, 1) + 400.0 / (3.0 * pi3)) <= 1e-12);
    CHECK(std::abs(filter_sampled_ift(sl, 2) + 400.0 / (15.0 * pi3)) <= 1e-12);
    CHECK(std::abs(filter_sampled_ift(sl, 3) + 400.0 / (35.0 * pi3)) <= 1e-12);
    const FilterSpec rl{FilterFamily::ram_lak, 10.0};
    CHECK(std::abs(filter_sampled_ift(rl, 0) - 100.0 / (2.0 * kPi)) <= 1e-12);
}

TEST_CASE("sampled filter matches quadrature of the inverse transform")
{
    for (auto fam : {FilterFamily::ram_lak, FilterFamily::shepp_logan, FilterFamily::cosine}) {
        for (double L : {1.0, 10.0}) {
            const FilterSpec spec{fam, L};
            for (int n = -5; n <= 5; ++n) {
                const double want = ift_oracle(fam, L, n * kPi / L);
                INFO(to_string(fam) << " L=" << L << " n=" << n);
                CHECK(std::abs(filter_sampled_ift(spec, n) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
                CHECK(std::abs(filter_ift(spec, n * kPi / L) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
            }
            for (double x : {0.0, 1e-5, 0.013, 0.37, 2.2, -3.9}) {
                const double want = ift_oracle(fam, L, x);
                CHECK(std::abs(filter_ift(spec, x) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST_CASE("filter response shapes")
{
    const FilterSpec sl{FilterFamily::shepp_logan, 2.0};
    CHECK(filter_response(sl, 0.0) == 0.0);
    CHECK(filter_response(sl, 2.5) == 0.0);
    CHECK(std::abs(filter_response(sl, 2.0) - 4.0 / kPi) <= 1e-15);
    CHECK(filter_response({FilterFamily::ram_lak, 2.0}, -1.5) == 1.5);
    CHECK(std::abs(filter_response({FilterFamily::cosine, 2.0}, 2.0)) <= 1e-15);
    CHECK(parse_filter_family("cosine") == FilterFamily::cosine);
    CHECK_THROWS_AS(parse_filter_family("hann"), std::invalid_argument);
}

TEST_CASE("discrete convolution")
{
    std::mt19937_64 gen(1);
    DiscreteSignal delta;
    delta.first = 0;
    delta.d = 0.1;
    delta.values = {1.0};
    const DiscreteSignal g = random_signal(gen, -3, 9);
    const DiscreteSignal dg = discrete_convolve(delta, g);
    for (int m = -3; m <= 5; ++m) CHECK(dg[m] == g[m]);

    for (int trial = 0; trial < 50; ++trial) {
        const DiscreteSignal f = random_signal(gen, -trial % 4, 3 + trial % 11);
        const DiscreteSignal h = random_signal(gen, trial % 3 - 1, 2 + trial % 7);
        const DiscreteSignal fh = discrete_convolve(f, h), hf = discrete_convolve(h, f);
        for (int m = fh.first - 2; m <= fh.last() + 2; ++m) {
            CHECK(std::abs(fh[m] - hf[m]) <= 1e-12);
            CHECK(std::abs(fh[m] - brute(f, h, m)) <= 1e-12);
        }
    }
    DiscreteSignal other = g;
    other.d = 0.2;
    CHECK_THROWS_AS(discrete_convolve(g, other), std::invalid_argument);
}

TEST_CASE("zero padding theorem")
{
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 100; ++trial) {
        const int K = 1 + trial % 17;
        const DiscreteSignal f = random_signal(gen, 0, K);
        const DiscreteSignal g = random_signal(gen, 0, K);
        // period 2M+1 >= 2K-1
        const int M = K - 1 + trial % 3;
        const DiscreteSignal p = periodic_convolve(f, g, M);
        for (int m = 0; m < K; ++m) CHECK(std::abs(p[m] - brute(f, g, m)) <= 1e-13);
    }
}

TEST_CASE("interpolation")
{
    std::mt19937_64 gen(3);
    const DiscreteSignal f = random_signal(gen, -6, 13);
    for (auto sch : {InterpScheme::nearest, InterpScheme::linear, InterpScheme::cubic})
        for (int k = -6; k <= 6; ++k) CHECK(interpolate(f, k * f.d, sch) == f[k]);

    DiscreteSignal two;
    two.first = 0;
    two.d = 1.0;
    two.values = {0.0, 2.0};
    CHECK(interpolate(two, 0.5, InterpScheme::linear) == 1.0);
    CHECK(interpolate(two, 0.49, InterpScheme::nearest) == 0.0);
    CHECK(interpolate(two, 0.5, InterpScheme::nearest) == 0.0);
    CHECK(interpolate(two, 0.51, InterpScheme::nearest) == 2.0);
    CHECK(interpolate(two, -0.1, InterpScheme::linear) == 0.0);
    CHECK(interpolate(two, 1.1, InterpScheme::cubic) == 0.0);

    // a cubic is reproduced by Catmull-Rom only up to degree 2; check a parabola
    DiscreteSignal par;
    par.first = -5;
    par.d = 0.5;
    for (int k = -5; k <= 5; ++k) par.values.push_back(std::pow(k * 0.5, 2));
    for (double x = -1.9; x <= 1.9; x += 0.13)
        CHECK(std::abs(interpolate(par, x, InterpScheme::cubic) - x * x) <= 1e-12);

    // linear interpolant integrates to d * sum f
    const double fine = 1e-4;
    double integral = 0.0;
    for (double x = -0.6; x <= 0.6; x += fine) integral += interpolate(f, x, InterpScheme::linear) * fine;
    double ds = 0.0;
    for (double v : f.values) ds += v;
    ds *= f.d;
    // the end samples carry only half their triangle inside the window
    ds -= 0.5 * f.d * (f.values.front() + f.values.back());
    CHECK(std::abs(integral - ds) <= 1e-3 * std::max(1.0, std::abs(ds)));
}

TEST_CASE("discrete back projection")
{
    auto one = [](double, double) { return 1.0; };
    CHECK(back_project_discrete(one, {0.3, -0.7}, 9) == doctest::Approx(1.0).epsilon(1e-15));
    auto tee = [](double t, double) { return t; };
    CHECK(std::abs(back_project_discrete(tee, {1.0, 0.0}, 2) - 0.5) <= 1e-15);

    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = U(gen), b = U(gen);
        auto h1 = [](double t, double th) { return std::sin(3 * t) + th; };
        auto h2 = [](double t, double th) { return t * t * std::cos(th); };
        auto mix = [&](double t, double th) { return a * h1(t, th) + b * h2(t, th); };
        const Point p{U(gen), U(gen)};
        const double lhs = back_project_discrete(mix, p, 11);
        const double rhs = a * back_project_discrete(h1, p, 11) + b * back_project_discrete(h2, p, 11);
        CHECK(std::abs(lhs - rhs) <= 1e-13);
    }
}

TEST_CASE("fbp reconstruction")
{
    const Phantom cr = builtin("crescent");
    const ImageGrid ref = rasterize(cr, 64);
    FbpConfig cfg;
    cfg.filter = FilterFamily::shepp_logan;
    cfg.interp = InterpScheme::linear;
    const Sinogram s18 = sample(cr, parallel_beam_samples(18, 20, 0.05));
    const ImageGrid img1 = reconstruct_fbp(s18, cfg, 64);
    CHECK(rmse(img1, ref) < 0.25);

    cfg.algorithm = FbpAlgorithm::II;
    const ImageGrid img2 = reconstruct_fbp(s18, cfg, 64);
    CHECK(rmse(img1, img2) < 0.05);

    Sinogram zero = s18;
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    for (double v : reconstruct_fbp(zero, cfg, 16).values) CHECK(v == 0.0);

    Sinogram scattered = sample(cr, scattered_samples(10, 1));
    CHECK_THROWS_AS(reconstruct_fbp(scattered, cfg, 8), std::invalid_argument);

    // bit-identical on repeat (fixed summation order)
    CHECK(reconstruct_fbp(s18, cfg, 32).values == reconstruct_fbp(s18, cfg, 32).values);
}

TEST_CASE("fbp error decreases with more data")
{
    const Phantom cr = builtin("crescent");
    const ImageGrid ref = rasterize(cr, 64);
    FbpConfig cfg;
    double prev = 1e9;
    for (auto [N, M] : {std::pair{18, 20}, std::pair{36, 40}, std::pair{72, 80}}) {
        const double e = rmse(reconstruct_fbp(sample(cr, parallel_beam_samples(N, M, 0.05)), cfg, 64), ref);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("fwhm")
{
    std::vector<double> xs, g, lz, tri;
    for (int i = -4000; i <= 4000; ++i) {
        const double w = i * 1e-3;
        xs.push_back(w);
        g.push_back(std::exp(-2.0 * w * w));
        const double T2 = 0.5;
        lz.push_back(T2 / (1.0 + std::pow(2.0 * kPi * T2 * w, 2)));
        tri.push_back(std::max(0.0, 2.0 * (1.0 - std::abs(w))));
    }
    CHECK(std::abs(fwhm(xs, g) - 2.0 * std::sqrt(std::log(2.0) / 2.0)) <= 1e-6);
    CHECK(std::abs(fwhm(xs, g) - 1.1774) <= 1e-3);
    CHECK(std::abs(fwhm(xs, lz) - 0.6366) <= 1e-3);
    CHECK(std::abs(fwhm(xs, tri) - 1.0) <= 1e-9);

    std::vector<double> bumpy = g;
    bumpy[100] = 0.9;
    CHECK_THROWS_AS(fwhm(xs, bumpy), NotUnimodal);
}
