#include "radonkit/image.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace radonkit {

PixelGrid::PixelGrid(int K_) : K(K_), c((K_ + 1) / 2)
{
    if (K_ < 1) throw std::invalid_argument("image size must be at least 1");
}

Point PixelGrid::center(int row, int col) const
{
    const double w = width();
    return {left(col) + 0.5 * w, top(row) - 0.5 * w};
}

Point PixelGrid::center(std::size_t index) const
{
    return center(static_cast<int>(index / K), static_cast<int>(index % K));
}

double rmse(const ImageGrid& a, const ImageGrid& b)
{
    if (a.K != b.K || a.values.size() != b.values.size())
        throw std::invalid_argument("rmse: image dimensions differ");
    if (a.values.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.values.size()));
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s)
{
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw std::invalid_argument("empty number");
    const char* first = s.data() + b;
    const char* last = s.data() + e + 1;
    if (*first == '+') ++first;
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::string image_to_pgm(const ImageGrid& img)
{
    double lo = 0.0, hi = 0.0;
    if (!img.values.empty()) {
        lo = hi = img.values[0];
        for (double v : img.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    std::ostringstream out;
    out << "P2\n# min=" << format_double(lo) << " max=" << format_double(hi) << "\n";
    out << img.K << " " << img.K << "\n65535\n";
    for (int r = 0; r < img.K; ++r) {
        for (int c = 0; c < img.K; ++c) {
            long q = 0;
            if (hi > lo) q = std::lround((img.at(r, c) - lo) / (hi - lo) * 65535.0);
            out << q << (c + 1 < img.K ? " " : "\n");
        }
    }
    return out.str();
}

std::string image_to_csv(const ImageGrid& img)
{
    std::string out;
    for (int r = 0; r < img.K; ++r) {
        for (int c = 0; c < img.K; ++c) {
            out += format_double(img.at(r, c));
            out += (c + 1 < img.K ? ',' : '\n');
        }
    }
    return out;
}

ImageGrid image_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(parse_double(cell));
        rows.push_back(std::move(row));
    }
    const int K = static_cast<int>(rows.size());
    ImageGrid img(K);
    for (int r = 0; r < K; ++r) {
        if (static_cast<int>(rows[r].size()) != K) throw std::invalid_argument("image csv is not square");
        for (int c = 0; c < K; ++c) img.at(r, c) = rows[r][c];
    }
    return img;
}

void write_image(const ImageGrid& img, const std::string& path, ImageFormat format)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << (format == ImageFormat::pgm ? image_to_pgm(img) : image_to_csv(img));
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

ImageGrid read_image_csv(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return image_from_csv(ss.str());
}

}  // namespace radonkit
