#include "radonkit/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace radonkit {

std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::fbp: return "fbp";
    case Algorithm::art: return "art";
    case Algorithm::kernel: return "kernel";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name)
{
    if (name == "fbp") return Algorithm::fbp;
    if (name == "art") return Algorithm::art;
    if (name == "kernel") return Algorithm::kernel;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

SampleSet ReconConfig::samples() const
{
    if (scattered) return scattered_samples(n_scattered, seed);
    return parallel_beam_samples(N, M, d);
}

Sinogram make_sinogram(const ReconConfig& cfg)
{
    Sinogram sino;
    if (!cfg.sinogram_path.empty()) {
        sino = load_sinogram(cfg.sinogram_path);
    } else {
        sino = sample(builtin(cfg.phantom), cfg.samples());
    }
    return add_noise(sino, cfg.noise);
}

namespace {

std::string art_method_name(ArtMethod m)
{
    switch (m) {
    case ArtMethod::automatic: return "auto";
    case ArtMethod::kaczmarz: return "kaczmarz";
    case ArtMethod::lsq: return "lsq";
    }
    return "?";
}

}  // namespace

ReconResult run_reconstruction(const ReconConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    const Sinogram sino = make_sinogram(cfg);
    ReconResult res;
    switch (cfg.algorithm) {
    case Algorithm::fbp:
        res.image = reconstruct_fbp(sino, cfg.fbp, cfg.K);
        break;
    case Algorithm::art: {
        ArtResult r = reconstruct_art(sino, cfg.K, cfg.art);
        res.image = std::move(r.image);
        res.info.emplace_back("art.solver", art_method_name(r.used));
        res.info.emplace_back("art.residual", format_double(r.residual));
        res.info.emplace_back("art.sweeps_run", std::to_string(r.sweeps));
        res.info.emplace_back("art.rank_deficient", r.rank_deficient ? "true" : "false");
        break;
    }
    case Algorithm::kernel: {
        std::optional<Phantom> ref;
        const std::string name = !sino.provenance.phantom.empty() ? sino.provenance.phantom : cfg.phantom;
        if (cfg.h != 1.0) ref = builtin(name);
        const KernelSystem sys =
            assemble_kernel_system(cfg.kernel, cfg.window, sino.samples, sino, cfg.h, ref ? &*ref : nullptr);
        KernelSolution sol = solve_and_evaluate(sys, cfg.kernel, sino.samples, cfg.K);
        res.image = std::move(sol.image);
        res.rcond = sys.rcond;
        res.info.emplace_back("kernel.entries", to_string(sys.audit.route));
        res.info.emplace_back("kernel.audit_family", sys.audit.family);
        res.info.emplace_back("kernel.audit_deviation", format_double(sys.audit.max_deviation));
        res.info.emplace_back("kernel.residual_inf", format_double(sol.residual_inf));
        break;
    }
    }
    for (double v : res.image.values)
        if (!std::isfinite(v)) throw NumericalError("reconstruction produced non-finite pixels");
    const std::string ref_name = !sino.provenance.phantom.empty() ? sino.provenance.phantom : cfg.phantom;
    if (!ref_name.empty()) {
        try {
            res.reference = rasterize(builtin(ref_name), cfg.K);
            res.rmse = rmse(res.image, *res.reference);
        } catch (const UnknownPhantom&) {
        }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

Report config_fields(const ReconConfig& cfg)
{
    Report r;
    if (!cfg.sinogram_path.empty()) r.emplace_back("sinogram", cfg.sinogram_path);
    r.emplace_back("phantom", cfg.phantom);
    r.emplace_back("layout", cfg.scattered ? "scattered" : "parallel");
    if (cfg.scattered) {
        r.emplace_back("samples", std::to_string(cfg.n_scattered));
    } else {
        r.emplace_back("angles", std::to_string(cfg.N));
        r.emplace_back("offsets", std::to_string(cfg.M));
        r.emplace_back("spacing", format_double(cfg.d));
    }
    r.emplace_back("seed", std::to_string(cfg.seed));
    r.emplace_back("noise", cfg.noise.to_string());
    r.emplace_back("size", std::to_string(cfg.K));
    r.emplace_back("algorithm", to_string(cfg.algorithm));
    switch (cfg.algorithm) {
    case Algorithm::fbp:
        r.emplace_back("fbp.filter", to_string(cfg.fbp.filter));
        r.emplace_back("fbp.interp", to_string(cfg.fbp.interp));
        r.emplace_back("fbp.algorithm", cfg.fbp.algorithm == FbpAlgorithm::I ? "I" : "II");
        r.emplace_back("fbp.bandlimit", cfg.fbp.bandlimit ? format_double(*cfg.fbp.bandlimit) : "auto");
        break;
    case Algorithm::art:
        r.emplace_back("art.method", art_method_name(cfg.art.method));
        r.emplace_back("art.lambda", format_double(cfg.art.kaczmarz.lambda));
        r.emplace_back("art.sweeps", std::to_string(cfg.art.kaczmarz.max_sweeps));
        r.emplace_back("art.tol", format_double(cfg.art.kaczmarz.tol));
        break;
    case Algorithm::kernel:
        r.emplace_back("kernel.family", to_string(cfg.kernel.family));
        r.emplace_back("kernel.eps", format_double(cfg.kernel.eps));
        if (cfg.kernel.family == KernelFamily::mq) r.emplace_back("kernel.rho", format_double(cfg.kernel.rho));
        if (cfg.kernel.family == KernelFamily::imq) r.emplace_back("kernel.L1", format_double(cfg.kernel.L1));
        r.emplace_back("kernel.window", to_string(cfg.window.family));
        r.emplace_back("kernel.mode", to_string(cfg.window.mode));
        if (cfg.window.family == WindowFamily::truncation) r.emplace_back("kernel.L2", format_double(cfg.window.L));
        else r.emplace_back("kernel.nu", format_double(cfg.window.nu));
        r.emplace_back("kernel.scale", format_double(cfg.h));
        break;
    }
    return r;
}

void write_report(const std::string& path, const Report& fields)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (const auto& [k, v] : fields) f << k << "=" << v << "\n";
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

Report read_report(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    Report r;
    std::string line;
    while (std::getline(f, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        r.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return r;
}

void SweepSpec::validate() const
{
    if (!(step > 0.0)) throw std::invalid_argument("sweep: step must be positive");
    if (!(start <= stop)) throw std::invalid_argument("sweep: start must not exceed stop");
    if (metric != "rmse" && metric != "rcond" && metric != "time")
        throw std::invalid_argument("sweep: metric must be rmse, rcond or time");
    ReconConfig probe = base;
    apply_parameter(probe, param, start);
}

std::vector<double> SweepSpec::grid() const
{
    std::vector<double> g;
    const double n = std::floor((stop - start) / step + 1e-9);
    char buf[32];
    for (long i = 0; i <= static_cast<long>(n); ++i) {
        // 0.1 + 2*0.1 prints as 0.30000000000000004 otherwise
        std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
        g.push_back(std::strtod(buf, nullptr));
    }
    return g;
}

void apply_parameter(ReconConfig& cfg, const std::string& param, double value)
{
    if (param == "eps") cfg.kernel.eps = value;
    else if (param == "nu") cfg.window.nu = value;
    else if (param == "rho") cfg.kernel.rho = value;
    else if (param == "L") {
        if (cfg.kernel.family == KernelFamily::imq) cfg.kernel.L1 = value;
        else cfg.window.L = value;
    } else if (param == "L2") cfg.window.L = value;
    else if (param == "h") cfg.h = value;
    else if (param == "lambda") cfg.art.kaczmarz.lambda = value;
    else throw std::invalid_argument("unknown sweep parameter '" + param + "'");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec)
{
    spec.validate();
    const std::vector<double> values = spec.grid();
    std::vector<SweepRow> rows(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepRow& row = rows[i];
        row.value = values[i];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ReconConfig cfg = spec.base;
            apply_parameter(cfg, spec.param, values[i]);
            const ReconResult res = run_reconstruction(cfg);
            row.rmse = res.rmse ? *res.rmse : std::numeric_limits<double>::quiet_NaN();
            row.rcond = res.rcond ? *res.rcond : std::numeric_limits<double>::quiet_NaN();
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
            row.rmse = row.rcond = std::numeric_limits<double>::quiet_NaN();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (spec.metric == "rmse") row.metric = row.rmse;
        else if (spec.metric == "rcond") row.metric = row.rcond;
        else row.metric = row.seconds;
    }
    return rows;
}

std::string sweep_to_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows)
{
    std::string out = spec.param + "," + spec.metric + ",rcond,time_s,status\n";
    for (const auto& r : rows) {
        std::string status = r.ok ? "ok" : "failed: " + r.error;
        for (char& c : status)
            if (c == ',' || c == '\n') c = ';';
        out += format_double(r.value) + "," + format_double(r.metric) + "," + format_double(r.rcond) + "," +
               format_double(r.seconds) + "," + status + "\n";
    }
    return out;
}

}  // namespace radonkit
