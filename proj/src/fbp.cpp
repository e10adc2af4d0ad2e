#include "radonkit/fbp.hpp"

#include "radonkit/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace radonkit {

FilterFamily parse_filter_family(const std::string& name)
{
    if (name == "ram-lak") return FilterFamily::ram_lak;
    if (name == "shepp-logan") return FilterFamily::shepp_logan;
    if (name == "cosine") return FilterFamily::cosine;
    throw std::invalid_argument("unknown filter '" + name + "'");
}

std::string to_string(FilterFamily f)
{
    switch (f) {
    case FilterFamily::ram_lak: return "ram-lak";
    case FilterFamily::shepp_logan: return "shepp-logan";
    case FilterFamily::cosine: return "cosine";
    }
    return "?";
}

double filter_response(const FilterSpec& spec, double w)
{
    const double aw = std::abs(w);
    if (aw > spec.L) return 0.0;
    switch (spec.family) {
    case FilterFamily::ram_lak: return aw;
    case FilterFamily::shepp_logan: return 2.0 * spec.L / kPi * std::abs(std::sin(kPi * w / (2.0 * spec.L)));
    case FilterFamily::cosine: return aw * std::cos(kPi * w / (2.0 * spec.L));
    }
    return 0.0;
}

namespace {

// int_0^L w cos(b w) dw
double ramp_cos(double b, double L)
{
    const double z = b * L;
    if (std::abs(z) < 1e-3) {
        const double z2 = z * z;
        return L * L * (0.5 - z2 / 8.0 + z2 * z2 / 144.0);
    }
    return L * std::sin(z) / b + (std::cos(z) - 1.0) / (b * b);
}

// int_0^L sin(b w) dw
double sin_int(double b, double L)
{
    const double z = b * L;
    if (std::abs(z) < 1e-3) {
        const double z2 = z * z;
        return L * z * (0.5 - z2 / 24.0 + z2 * z2 / 720.0);
    }
    return (1.0 - std::cos(z)) / b;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

double filter_ift(const FilterSpec& spec, double x)
{
    const double L = spec.L;
    const double a = kPi / (2.0 * L);
    switch (spec.family) {
    case FilterFamily::ram_lak:
        return ramp_cos(x, L) / kPi;
    case FilterFamily::shepp_logan:
        return (2.0 * L / kPi) * 0.5 * (sin_int(a + x, L) + sin_int(a - x, L)) / kPi;
    case FilterFamily::cosine:
        return 0.5 * (ramp_cos(a + x, L) + ramp_cos(a - x, L)) / kPi;
    }
    return 0.0;
}

double filter_sampled_ift(const FilterSpec& spec, int n)
{
    const double L = spec.L;
    const double nn = static_cast<double>(n);
    const double q = 1.0 - 4.0 * nn * nn;
    switch (spec.family) {
    case FilterFamily::ram_lak: {
        const double s = sinc(kPi * nn / 2.0);
        return L * L / (2.0 * kPi) * (2.0 * sinc(kPi * nn) - s * s);
    }
    case FilterFamily::shepp_logan:
        return 4.0 * L * L / (kPi * kPi * kPi * q);
    case FilterFamily::cosine: {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return 2.0 * L * L / (kPi * kPi * kPi) * (kPi * sign / q - 2.0 * (1.0 + 4.0 * nn * nn) / (q * q));
    }
    }
    return 0.0;
}

double DiscreteSignal::operator[](int n) const
{
    if (n < first || n > last()) return 0.0;
    return values[static_cast<std::size_t>(n - first)];
}

namespace {

void check_spacing(const DiscreteSignal& f, const DiscreteSignal& g)
{
    if (std::abs(f.d - g.d) > 1e-12 * std::max(std::abs(f.d), std::abs(g.d)))
        throw std::invalid_argument("convolution: signals have different spacing");
}

}  // namespace

DiscreteSignal discrete_convolve(const DiscreteSignal& f, const DiscreteSignal& g)
{
    check_spacing(f, g);
    DiscreteSignal out;
    out.d = f.d;
    if (f.values.empty() || g.values.empty()) return out;
    out.first = f.first + g.first;
    out.values.assign(f.values.size() + g.values.size() - 1, 0.0);
    for (std::size_t m = 0; m < out.values.size(); ++m) {
        double sum = 0.0;
        const std::size_t jlo = m >= g.values.size() - 1 ? m - (g.values.size() - 1) : 0;
        const std::size_t jhi = std::min(m, f.values.size() - 1);
        for (std::size_t j = jlo; j <= jhi; ++j) sum += f.values[j] * g.values[m - j];
        out.values[m] = sum;
    }
    return out;
}

DiscreteSignal periodic_convolve(const DiscreteSignal& f, const DiscreteSignal& g, int M)
{
    check_spacing(f, g);
    if (M < 0) throw std::invalid_argument("periodic_convolve: M must be non-negative");
    const int P = 2 * M + 1;
    auto wrap = [&](int n) {
        int r = ((n + M) % P + P) % P;
        return r - M;
    };
    DiscreteSignal out;
    out.d = f.d;
    out.first = -M;
    out.values.assign(static_cast<std::size_t>(P), 0.0);
    for (int m = -M; m <= M; ++m) {
        double sum = 0.0;
        for (int j = -M; j <= M; ++j) sum += f[j] * g[wrap(m - j)];
        out.values[static_cast<std::size_t>(m + M)] = sum;
    }
    return out;
}

InterpScheme parse_interp(const std::string& name)
{
    if (name == "nearest") return InterpScheme::nearest;
    if (name == "linear") return InterpScheme::linear;
    if (name == "cubic") return InterpScheme::cubic;
    throw std::invalid_argument("unknown interpolation '" + name + "'");
}

std::string to_string(InterpScheme s)
{
    switch (s) {
    case InterpScheme::nearest: return "nearest";
    case InterpScheme::linear: return "linear";
    case InterpScheme::cubic: return "cubic";
    }
    return "?";
}

double interpolate(const DiscreteSignal& f, double x, InterpScheme scheme)
{
    if (f.values.empty()) return 0.0;
    const double u = x / f.d;
    const double r = std::round(u);
    if (std::abs(u - r) <= 1e-12 * std::max(1.0, std::abs(u))) return f[static_cast<int>(r)];
    if (u < f.first || u > f.last()) return 0.0;
    switch (scheme) {
    case InterpScheme::nearest:
        // half-open cell [m - 1/2, m + 1/2): a midpoint goes to the lower index
        return f[static_cast<int>(std::ceil(u - 0.5))];
    case InterpScheme::linear: {
        const double m0 = std::floor(u);
        const double fr = u - m0;
        const int m = static_cast<int>(m0);
        return (1.0 - fr) * f[m] + fr * f[m + 1];
    }
    case InterpScheme::cubic: {
        const double m0 = std::floor(u);
        const double s = u - m0;
        const int m = static_cast<int>(m0);
        const double s2 = s * s, s3 = s2 * s;
        return 0.5 * ((-s3 + 2.0 * s2 - s) * f[m - 1] + (3.0 * s3 - 5.0 * s2 + 2.0) * f[m] +
                      (-3.0 * s3 + 4.0 * s2 + s) * f[m + 1] + (s3 - s2) * f[m + 2]);
    }
    }
    return 0.0;
}

double back_project_discrete(const std::function<double(double, double)>& h, const Point& p, int N)
{
    if (N < 1) throw std::invalid_argument("back_project_discrete: N must be at least 1");
    double sum = 0.0;
    for (int k = 0; k < N; ++k) {
        const double th = grid_angle(k, N);
        sum += h(p.x * std::cos(th) + p.y * std::sin(th), th);
    }
    return sum / N;
}

DiscreteSignal fbp_kernel(const FbpConfig& cfg, double d, int half_width)
{
    const double cycles = cfg.bandlimit ? *cfg.bandlimit : 1.0 / (2.0 * d);
    if (!(cycles > 0.0)) throw std::invalid_argument("band limit must be positive");
    const FilterSpec spec{cfg.filter, 2.0 * kPi * cycles};
    DiscreteSignal q;
    q.d = d;
    q.first = -half_width;
    q.values.resize(static_cast<std::size_t>(2 * half_width + 1));
    for (int n = -half_width; n <= half_width; ++n)
        q.values[static_cast<std::size_t>(n + half_width)] = d * filter_ift(spec, n * d);
    return q;
}

ImageGrid reconstruct_fbp(const Sinogram& sino, const FbpConfig& cfg, int K)
{
    const SampleSet& s = sino.samples;
    if (s.layout != Layout::parallel) throw std::invalid_argument("filtered back-projection needs a parallel-beam sinogram");
    if (sino.values.size() != s.size()) throw std::invalid_argument("sinogram values do not match samples");
    const int N = s.N, M = s.M;
    const double d = s.d;
    const std::size_t row_len = static_cast<std::size_t>(2 * M + 1);

    std::vector<double> cs(N), sn(N);
    for (int l = 0; l < N; ++l) {
        cs[l] = std::cos(s.angle(l));
        sn[l] = std::sin(s.angle(l));
    }
    PixelGrid grid(K);
    ImageGrid img(K);

    if (cfg.algorithm == FbpAlgorithm::I) {
        const DiscreteSignal q = fbp_kernel(cfg, d, 2 * M);
        std::vector<DiscreteSignal> filtered(N);
        for (int l = 0; l < N; ++l) {
            DiscreteSignal& g = filtered[l];
            g.d = d;
            g.first = -M;
            g.values.assign(row_len, 0.0);
            const double* R = sino.values.data() + l * row_len;
            for (int m = -M; m <= M; ++m) {
                double sum = 0.0;
                for (int j = -M; j <= M; ++j) sum += q[m - j] * R[j + M];
                g.values[static_cast<std::size_t>(m + M)] = sum;
            }
        }
        parallel_for(static_cast<std::size_t>(K), [&](std::size_t r) {
            for (int c = 0; c < K; ++c) {
                const Point p = grid.center(static_cast<int>(r), c);
                double sum = 0.0;
                for (int l = 0; l < N; ++l) sum += interpolate(filtered[l], p.x * cs[l] + p.y * sn[l], cfg.interp);
                img.at(static_cast<int>(r), c) = sum / (2.0 * N);
            }
        });
    } else {
        const int reach = static_cast<int>(std::ceil(std::sqrt(2.0) / d)) + M + 3;
        const DiscreteSignal q = fbp_kernel(cfg, d, reach);
        parallel_for(static_cast<std::size_t>(K), [&](std::size_t r) {
            for (int c = 0; c < K; ++c) {
                const Point p = grid.center(static_cast<int>(r), c);
                double sum = 0.0;
                for (int l = 0; l < N; ++l) {
                    const double t = p.x * cs[l] + p.y * sn[l];
                    const double* R = sino.values.data() + l * row_len;
                    double inner = 0.0;
                    for (int j = -M; j <= M; ++j) inner += interpolate(q, t - j * d, cfg.interp) * R[j + M];
                    sum += inner;
                }
                img.at(static_cast<int>(r), c) = sum / (2.0 * N);
            }
        });
    }
    return img;
}

double fwhm(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size() || xs.size() < 3) throw std::invalid_argument("fwhm: need matching samples");
    const std::size_t n = ys.size();
    const std::size_t peak = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    for (std::size_t i = 0; i < peak; ++i)
        if (ys[i] > ys[i + 1]) throw NotUnimodal("fwhm: samples rise again left of the maximum");
    for (std::size_t i = peak; i + 1 < n; ++i)
        if (ys[i + 1] > ys[i]) throw NotUnimodal("fwhm: samples rise again right of the maximum");
    const double half = 0.5 * ys[peak];
    std::size_t i = peak;
    while (i > 0 && ys[i - 1] > half) --i;
    if (i == 0) throw NotUnimodal("fwhm: left side never drops to half maximum");
    std::size_t j = peak;
    while (j + 1 < n && ys[j + 1] > half) ++j;
    if (j + 1 == n) throw NotUnimodal("fwhm: right side never drops to half maximum");
    auto cross = [&](std::size_t lo, std::size_t hi) {
        return xs[lo] + (half - ys[lo]) * (xs[hi] - xs[lo]) / (ys[hi] - ys[lo]);
    };
    return cross(j, j + 1) - cross(i - 1, i);
}

}  // namespace radonkit
