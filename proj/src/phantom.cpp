#include "radonkit/phantom.hpp"

#include <cmath>

namespace radonkit {

double radon_disc(double r, double t)
{
    if (std::abs(t) > r) return 0.0;
    return 2.0 * std::sqrt(r * r - t * t);
}

namespace {

double radon_component(const DiscComponent& d, const LineParam& line)
{
    const double shift = d.center.x * std::cos(line.theta) + d.center.y * std::sin(line.theta);
    return d.weight * radon_disc(d.radius, line.t - shift);
}

double radon_component(const EllipseComponent& e, const LineParam& line)
{
    const double shift = e.center.x * std::cos(line.theta) + e.center.y * std::sin(line.theta);
    const double t = line.t - shift;
    const double ca = std::cos(line.theta - e.phi);
    const double sa = std::sin(line.theta - e.phi);
    const double rho2 = e.A * e.A * ca * ca + e.B * e.B * sa * sa;
    if (t * t > rho2) return 0.0;
    return e.weight * 2.0 * e.A * e.B / rho2 * std::sqrt(rho2 - t * t);
}

double density_component(const DiscComponent& d, const Point& p)
{
    const double dx = p.x - d.center.x;
    const double dy = p.y - d.center.y;
    return dx * dx + dy * dy <= d.radius * d.radius ? d.weight : 0.0;
}

double density_component(const EllipseComponent& e, const Point& p)
{
    const double dx = p.x - e.center.x;
    const double dy = p.y - e.center.y;
    const double c = std::cos(e.phi);
    const double s = std::sin(e.phi);
    const double u = (dx * c + dy * s) / e.A;
    const double v = (-dx * s + dy * c) / e.B;
    return u * u + v * v <= 1.0 ? e.weight : 0.0;
}

}  // namespace

double radon_analytic(const Phantom& ph, const LineParam& line)
{
    double sum = 0.0;
    for (const auto& comp : ph.components)
        sum += std::visit([&](const auto& c) { return radon_component(c, line); }, comp);
    return sum;
}

double radon_scaled(const Phantom& ph, double h, const LineParam& line)
{
    if (!(h > 0.0)) throw std::invalid_argument("radon_scaled: h must be positive");
    if (h == 1.0) return radon_analytic(ph, line);
    return radon_analytic(ph, {h * line.t, line.theta}) / h;
}

double eval_density(const Phantom& ph, const Point& p)
{
    double sum = 0.0;
    for (const auto& comp : ph.components)
        sum += std::visit([&](const auto& c) { return density_component(c, p); }, comp);
    return sum;
}

ImageGrid rasterize(const Phantom& ph, int K)
{
    PixelGrid grid(K);
    ImageGrid img(K);
    for (int r = 0; r < K; ++r)
        for (int c = 0; c < K; ++c) img.at(r, c) = eval_density(ph, grid.center(r, c));
    return img;
}

Phantom builtin(const std::string& name)
{
    Phantom ph;
    ph.name = name;
    if (name == "crescent") {
        ph.components.push_back(DiscComponent{{0.0, 0.0}, 0.5, 1.0});
        ph.components.push_back(DiscComponent{{0.125, 0.0}, 0.375, -0.5});
    } else if (name == "bulls-eye") {
        ph.components.push_back(DiscComponent{{0.0, 0.0}, 0.8, 0.5});
        ph.components.push_back(DiscComponent{{0.0, 0.0}, 0.55, 0.5});
        ph.components.push_back(DiscComponent{{0.0, 0.0}, 0.3, -0.25});
    } else if (name == "shepp-logan") {
        // modified (higher contrast) table: weight, A, B, cx, cy, phi in degrees
        struct Row { double w, A, B, cx, cy, deg; };
        const Row table[10] = {
            {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
            {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
            {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
            {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
            {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
            {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
            {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
            {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
            {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
            {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
        };
        for (const Row& r : table)
            ph.components.push_back(EllipseComponent{{r.cx, r.cy}, r.A, r.B, r.deg * kPi / 180.0, r.w});
    } else {
        throw UnknownPhantom("unknown phantom '" + name + "'");
    }
    return ph;
}

std::vector<std::string> builtin_names() { return {"crescent", "bulls-eye", "shepp-logan"}; }

}  // namespace radonkit
