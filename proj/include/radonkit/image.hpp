#pragma once

#include "radonkit/geometry.hpp"

#include <string>
#include <vector>

namespace radonkit {

// Pixel layout shared by rasterization, ART and all reconstructions:
// c = floor((K+1)/2), pixel (row, col) has top-left corner (col/c - 1, 1 - row/c)
// and side 1/c. Rows run top-down, values are stored row-major.
struct PixelGrid {
    int K = 0;
    int c = 0;
    explicit PixelGrid(int K_);
    double width() const { return 1.0 / c; }
    double left(int col) const { return static_cast<double>(col) / c - 1.0; }
    double top(int row) const { return 1.0 - static_cast<double>(row) / c; }
    Point center(int row, int col) const;
    Point center(std::size_t index) const;
};

struct ImageGrid {
    int K = 0;
    std::vector<double> values;

    ImageGrid() = default;
    explicit ImageGrid(int K_) : K(K_), values(static_cast<std::size_t>(K_) * K_, 0.0) {}
    double& at(int row, int col) { return values[static_cast<std::size_t>(row) * K + col]; }
    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * K + col]; }
};

double rmse(const ImageGrid& a, const ImageGrid& b);

enum class ImageFormat { pgm, csv };

void write_image(const ImageGrid& img, const std::string& path, ImageFormat format);
std::string image_to_pgm(const ImageGrid& img);
std::string image_to_csv(const ImageGrid& img);
ImageGrid image_from_csv(const std::string& text);
ImageGrid read_image_csv(const std::string& path);

// shortest decimal form that parses back to the same double
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace radonkit
