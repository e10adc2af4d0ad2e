#pragma once

#include "radonkit/image.hpp"
#include "radonkit/sinogram.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace radonkit {

enum class FilterFamily { ram_lak, shepp_logan, cosine };

// L is the band limit in angular frequency: the filter lives on |w| <= L.
struct FilterSpec {
    FilterFamily family = FilterFamily::shepp_logan;
    double L = 1.0;
};

FilterFamily parse_filter_family(const std::string& name);
std::string to_string(FilterFamily f);

// Filter profile A(w) on |w| <= L, zero outside.
double filter_response(const FilterSpec& spec, double w);
// (1/2pi) * integral of A(w) e^{iwx} over [-L, L]
double filter_ift(const FilterSpec& spec, double x);
// filter_ift at x = n*pi/L, from the closed forms
double filter_sampled_ift(const FilterSpec& spec, int n);

struct DiscreteSignal {
    int first = 0;  // index of values[0]
    std::vector<double> values;
    double d = 1.0;

    int last() const { return first + static_cast<int>(values.size()) - 1; }
    // zero outside the stored window
    double operator[](int n) const;
};

DiscreteSignal discrete_convolve(const DiscreteSignal& f, const DiscreteSignal& g);
// Convolution of the (2M+1)-periodic extensions of f and g restricted to -M..M,
// returned on indices -M..M.
DiscreteSignal periodic_convolve(const DiscreteSignal& f, const DiscreteSignal& g, int M);

enum class InterpScheme { nearest, linear, cubic };
InterpScheme parse_interp(const std::string& name);
std::string to_string(InterpScheme s);

// W-interpolation sum_m f_m W(x/d - m); zero outside [first*d, last*d].
double interpolate(const DiscreteSignal& f, double x, InterpScheme scheme);

// (1/N) sum_k h(x cos(k pi/N) + y sin(k pi/N), k pi/N), ascending k
double back_project_discrete(const std::function<double(double, double)>& h, const Point& p, int N);

enum class FbpAlgorithm { I, II };

struct FbpConfig {
    FilterFamily filter = FilterFamily::shepp_logan;
    InterpScheme interp = InterpScheme::linear;
    FbpAlgorithm algorithm = FbpAlgorithm::I;
    // band limit in cycles per unit offset; default 1/(2d)
    std::optional<double> bandlimit;
};

// Convolution kernel d * filter_ift(x = n d) for |n| <= half_width.
DiscreteSignal fbp_kernel(const FbpConfig& cfg, double d, int half_width);

ImageGrid reconstruct_fbp(const Sinogram& sino, const FbpConfig& cfg, int K);

class NotUnimodal : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

double fwhm(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace radonkit
