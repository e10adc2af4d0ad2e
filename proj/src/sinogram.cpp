#include "radonkit/sinogram.hpp"

#include "radonkit/image.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace radonkit {

NoiseSpec NoiseSpec::gaussian(double mean, double variance, std::uint64_t seed)
{
    NoiseSpec s;
    s.kind = Kind::gaussian;
    s.mean = mean;
    s.variance = variance;
    s.seed = seed;
    s.validate();
    return s;
}

NoiseSpec NoiseSpec::poisson(double scale, std::uint64_t seed)
{
    NoiseSpec s;
    s.kind = Kind::poisson;
    s.scale = scale;
    s.seed = seed;
    s.validate();
    return s;
}

NoiseSpec NoiseSpec::saltpepper(double density, std::optional<double> amplitude, std::uint64_t seed)
{
    NoiseSpec s;
    s.kind = Kind::saltpepper;
    s.density = density;
    s.amplitude = amplitude;
    s.seed = seed;
    s.validate();
    return s;
}

void NoiseSpec::validate() const
{
    switch (kind) {
    case Kind::none:
        break;
    case Kind::gaussian:
        if (!(variance >= 0.0) || !std::isfinite(mean) || !std::isfinite(variance))
            throw std::invalid_argument("gaussian noise: variance must be a finite value >= 0");
        break;
    case Kind::poisson:
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw std::invalid_argument("poisson noise: scale must be positive");
        break;
    case Kind::saltpepper:
        if (!(density >= 0.0 && density <= 1.0))
            throw std::invalid_argument("salt-pepper noise: density must lie in [0, 1]");
        if (amplitude && !std::isfinite(*amplitude))
            throw std::invalid_argument("salt-pepper noise: amplitude must be finite");
        break;
    }
}

namespace {

std::vector<double> split_numbers(const std::string& s)
{
    std::vector<double> out;
    std::istringstream in(s);
    std::string cell;
    while (std::getline(in, cell, ',')) out.push_back(parse_double(cell));
    return out;
}

}  // namespace

NoiseSpec NoiseSpec::parse(const std::string& text, std::uint64_t seed)
{
    if (text.empty() || text == "none") return none();
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::vector<double> args;
    try {
        if (colon != std::string::npos) args = split_numbers(text.substr(colon + 1));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad noise parameters in '" + text + "'");
    }
    if (kind == "gaussian" && args.size() == 2) return gaussian(args[0], args[1], seed);
    if (kind == "poisson" && args.size() <= 1) return poisson(args.empty() ? 1000.0 : args[0], seed);
    if (kind == "saltpepper" && (args.size() == 1 || args.size() == 2))
        return saltpepper(args[0], args.size() == 2 ? std::optional<double>(args[1]) : std::nullopt, seed);
    throw std::invalid_argument("bad noise spec '" + text + "'");
}

std::string NoiseSpec::to_string() const
{
    switch (kind) {
    case Kind::gaussian:
        return "gaussian:" + format_double(mean) + "," + format_double(variance);
    case Kind::poisson:
        return "poisson:" + format_double(scale);
    case Kind::saltpepper:
        return "saltpepper:" + format_double(density) + (amplitude ? "," + format_double(*amplitude) : "");
    case Kind::none:
        break;
    }
    return "none";
}

Sinogram sample(const Phantom& ph, const SampleSet& s)
{
    Sinogram out;
    out.samples = s;
    out.values.reserve(s.size());
    for (const auto& line : s.samples) out.values.push_back(radon_analytic(ph, line));
    out.provenance.phantom = ph.name;
    return out;
}

Sinogram add_noise(const Sinogram& sino, const NoiseSpec& spec)
{
    spec.validate();
    Sinogram out = sino;
    if (spec.kind == NoiseSpec::Kind::none) return out;
    CounterRng rng(spec.seed);
    switch (spec.kind) {
    case NoiseSpec::Kind::gaussian: {
        boost::random::normal_distribution<double> dist(spec.mean, std::sqrt(spec.variance));
        for (double& v : out.values) v += dist(rng);
        break;
    }
    case NoiseSpec::Kind::poisson: {
        for (double& v : out.values) {
            if (v < 0.0) continue;
            const double lambda = v * spec.scale;
            if (lambda == 0.0) continue;
            boost::random::poisson_distribution<long long, double> dist(lambda);
            v = static_cast<double>(dist(rng)) / spec.scale;
        }
        break;
    }
    case NoiseSpec::Kind::saltpepper: {
        double amp = 0.0;
        if (spec.amplitude) {
            amp = *spec.amplitude;
        } else if (!out.values.empty()) {
            amp = *std::max_element(out.values.begin(), out.values.end());
        }
        for (double& v : out.values) {
            // two draws per entry keep the stream aligned regardless of outcome
            const double hit = rng.uniform();
            const double coin = rng.uniform();
            if (hit < spec.density) v = coin < 0.5 ? 0.0 : amp;
        }
        break;
    }
    case NoiseSpec::Kind::none:
        break;
    }
    out.provenance.noise = spec.to_string() + "@" + std::to_string(spec.seed);
    return out;
}

std::string write_csv(const Sinogram& sino)
{
    std::string out = "# radon-kit sinogram v1\n";
    const SampleSet& s = sino.samples;
    if (s.layout == Layout::parallel) {
        out += "layout,parallel," + std::to_string(s.N) + "," + std::to_string(s.M) + "," + format_double(s.d) + "\n";
    } else {
        out += "layout,scattered," + std::to_string(s.size()) + "\n";
    }
    if (!sino.provenance.phantom.empty()) out += "# phantom," + sino.provenance.phantom + "\n";
    out += "# noise," + sino.provenance.noise + "\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += format_double(s[i].t) + "," + format_double(s[i].theta) + "," + format_double(sino.values[i]) + "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split_cells(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

long parse_int(const std::string& s, std::size_t lineno)
{
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineno, "expected an integer, got '" + s + "'");
    }
}

double parse_value(const std::string& s, std::size_t lineno)
{
    try {
        return parse_double(s);
    } catch (const std::exception&) {
        throw ParseError(lineno, "expected a number, got '" + s + "'");
    }
}

}  // namespace

Sinogram read_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };
    if (!next() || line != "# radon-kit sinogram v1") throw ParseError(1, "missing sinogram header");
    if (!next()) throw ParseError(2, "missing layout line");
    Sinogram sino;
    std::size_t expected = 0;
    {
        const auto cells = split_cells(line);
        if (cells.size() >= 2 && cells[0] == "layout" && cells[1] == "parallel" && cells.size() == 5) {
            sino.samples.layout = Layout::parallel;
            sino.samples.N = static_cast<int>(parse_int(cells[2], lineno));
            sino.samples.M = static_cast<int>(parse_int(cells[3], lineno));
            sino.samples.d = parse_value(cells[4], lineno);
            if (sino.samples.N < 1 || sino.samples.M < 0 || !(sino.samples.d > 0.0))
                throw ParseError(lineno, "invalid parallel-beam parameters");
            expected = static_cast<std::size_t>(sino.samples.N) * (2 * sino.samples.M + 1);
        } else if (cells.size() == 3 && cells[0] == "layout" && cells[1] == "scattered") {
            sino.samples.layout = Layout::scattered;
            const long n = parse_int(cells[2], lineno);
            if (n < 1) throw ParseError(lineno, "invalid sample count");
            expected = static_cast<std::size_t>(n);
        } else {
            throw ParseError(lineno, "bad layout line");
        }
    }
    while (next()) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto cells = split_cells(line.substr(1));
            std::string key = cells[0];
            key.erase(0, key.find_first_not_of(' '));
            const std::string value = line.substr(line.find(',') == std::string::npos ? line.size() : line.find(',') + 1);
            if (key == "phantom") sino.provenance.phantom = value;
            else if (key == "noise") sino.provenance.noise = value;
            continue;
        }
        const auto cells = split_cells(line);
        if (cells.size() != 3) throw ParseError(lineno, "expected t,theta,value");
        LineParam p{parse_value(cells[0], lineno), parse_value(cells[1], lineno)};
        const double v = parse_value(cells[2], lineno);
        if (!std::isfinite(p.t) || !std::isfinite(v)) throw ParseError(lineno, "non-finite value");
        if (!(p.theta >= 0.0 && p.theta < kPi)) throw ParseError(lineno, "angle outside [0, pi)");
        if (sino.samples.samples.size() == expected) throw ParseError(lineno, "more rows than the layout declares");
        sino.samples.samples.push_back(p);
        sino.values.push_back(v);
    }
    if (sino.samples.size() != expected)
        throw ParseError(lineno + 1, "expected " + std::to_string(expected) + " rows, found " +
                                         std::to_string(sino.samples.size()));
    return sino;
}

void save_sinogram(const Sinogram& sino, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << write_csv(sino);
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

Sinogram load_sinogram(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return read_csv(ss.str());
}

}  // namespace radonkit
