#pragma once

#include "radonkit/geometry.hpp"
#include "radonkit/image.hpp"

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace radonkit {

struct DiscComponent {
    Point center;
    double radius = 1.0;
    double weight = 1.0;
};

struct EllipseComponent {
    Point center;
    double A = 1.0;  // semi-axis along the rotated x direction
    double B = 1.0;
    double phi = 0.0;
    double weight = 1.0;
};

using PhantomComponent = std::variant<DiscComponent, EllipseComponent>;

struct Phantom {
    std::string name;
    std::vector<PhantomComponent> components;
};

class UnknownPhantom : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

double radon_disc(double r, double t);
double radon_analytic(const Phantom& ph, const LineParam& line);
double radon_scaled(const Phantom& ph, double h, const LineParam& line);
double eval_density(const Phantom& ph, const Point& p);
ImageGrid rasterize(const Phantom& ph, int K);
Phantom builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace radonkit
