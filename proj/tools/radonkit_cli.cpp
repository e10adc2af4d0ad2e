#include "radonkit/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace radonkit;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct Options {
    std::string phantom = "crescent";
    std::string sinogram;
    int angles = 18;
    int offsets = 20;
    double spacing = 0.05;
    std::size_t scattered = 0;
    std::uint64_t seed = 1;
    std::string noise = "none";
    int size = 64;
    std::string out;
    std::string report;
    std::string format;

    std::string filter = "shepp-logan";
    std::string interp = "linear";
    std::string fbp_algorithm = "I";
    std::optional<double> bandlimit;

    std::string method = "auto";
    double lambda = 1.0;
    int sweeps = 50;
    double tol = 1e-10;

    std::string kernel = "gaussian";
    std::string window;
    std::string mode = "all";
    std::optional<double> eps, rho, L1, L2, nu;
    double scale = 1.0;
};

void add_sampling(CLI::App* app, Options& o)
{
    app->add_option("--name,--phantom", o.phantom, "builtin phantom");
    app->add_option("--angles", o.angles, "number of projection angles N");
    app->add_option("--offsets", o.offsets, "offsets per angle are -M..M");
    app->add_option("--spacing", o.spacing, "offset spacing d");
    app->add_option("--scattered", o.scattered, "use this many random lines instead of parallel beams");
    app->add_option("--seed", o.seed, "seed for noise and scattered lines");
    app->add_option("--noise", o.noise, "none | gaussian:MEAN,VAR | poisson:SCALE | saltpepper:DENSITY[,AMP]");
}

void add_output(CLI::App* app, Options& o)
{
    app->add_option("--size", o.size, "image side K");
    app->add_option("--out", o.out, "output path");
    app->add_option("--report", o.report, "key=value report path");
    app->add_option("--format", o.format, "pgm | csv (default from the --out extension)");
}

void add_fbp(CLI::App* app, Options& o)
{
    app->add_option("--filter", o.filter, "ram-lak | shepp-logan | cosine");
    app->add_option("--interp", o.interp, "nearest | linear | cubic");
    app->add_option("--algorithm", o.fbp_algorithm, "I | II");
    app->add_option("--bandlimit", o.bandlimit, "band limit in cycles per unit offset");
}

void add_art(CLI::App* app, Options& o)
{
    app->add_option("--method", o.method, "auto | kaczmarz | lsq");
    app->add_option("--lambda", o.lambda, "relaxation in (0,2)");
    app->add_option("--sweeps", o.sweeps, "maximum Kaczmarz sweeps");
    app->add_option("--tol", o.tol, "stop when the residual norm falls below this");
}

void add_kernel(CLI::App* app, Options& o)
{
    app->add_option("--kernel", o.kernel, "gaussian | imq | mq | wendland20");
    app->add_option("--window", o.window, "none | trunc | gauss | compact (default depends on the kernel)");
    app->add_option("--mode", o.mode, "all | diag");
    app->add_option("--eps", o.eps, "kernel shape parameter");
    app->add_option("--rho", o.rho, "multiquadric parameter");
    app->add_option("--L1", o.L1, "imq inner truncation radius");
    app->add_option("--L2", o.L2, "truncation window radius");
    app->add_option("--nu", o.nu, "gaussian or compact window parameter");
    app->add_option("--scale", o.scale, "dilation h of the scaled problem");
}

ReconConfig build_config(const Options& o, Algorithm algorithm)
{
    ReconConfig cfg;
    cfg.phantom = o.phantom;
    cfg.sinogram_path = o.sinogram;
    cfg.scattered = o.scattered > 0;
    cfg.n_scattered = o.scattered;
    cfg.N = o.angles;
    cfg.M = o.offsets;
    cfg.d = o.spacing;
    cfg.seed = o.seed;
    cfg.noise = NoiseSpec::parse(o.noise, o.seed);
    cfg.K = o.size;
    cfg.algorithm = algorithm;

    cfg.fbp.filter = parse_filter_family(o.filter);
    cfg.fbp.interp = parse_interp(o.interp);
    if (o.fbp_algorithm == "I") cfg.fbp.algorithm = FbpAlgorithm::I;
    else if (o.fbp_algorithm == "II") cfg.fbp.algorithm = FbpAlgorithm::II;
    else throw std::invalid_argument("--algorithm must be I or II");
    cfg.fbp.bandlimit = o.bandlimit;

    if (o.method == "auto") cfg.art.method = ArtMethod::automatic;
    else if (o.method == "kaczmarz") cfg.art.method = ArtMethod::kaczmarz;
    else if (o.method == "lsq") cfg.art.method = ArtMethod::lsq;
    else throw std::invalid_argument("--method must be auto, kaczmarz or lsq");
    cfg.art.kaczmarz.lambda = o.lambda;
    cfg.art.kaczmarz.max_sweeps = o.sweeps;
    cfg.art.kaczmarz.tol = o.tol;

    const KernelFamily fam = parse_kernel_family(o.kernel);
    cfg.kernel = KernelModel::defaults(fam);
    cfg.window = WindowSpec::defaults(fam);
    if (!o.window.empty()) cfg.window.family = parse_window_family(o.window);
    cfg.window.mode = parse_window_mode(o.mode);
    if (o.eps) cfg.kernel.eps = *o.eps;
    if (o.rho) cfg.kernel.rho = *o.rho;
    if (o.L1) cfg.kernel.L1 = *o.L1;
    if (o.L2) cfg.window.L = *o.L2;
    if (o.nu) cfg.window.nu = *o.nu;
    cfg.h = o.scale;
    return cfg;
}

ImageFormat output_format(const Options& o)
{
    if (o.format == "pgm") return ImageFormat::pgm;
    if (o.format == "csv") return ImageFormat::csv;
    if (!o.format.empty()) throw std::invalid_argument("--format must be pgm or csv");
    if (o.out.size() >= 4 && o.out.compare(o.out.size() - 4, 4, ".csv") == 0) return ImageFormat::csv;
    return ImageFormat::pgm;
}

void log_stage(const std::string& msg) { std::cerr << "[radonkit] " << msg << "\n"; }

std::string command_line(int argc, char** argv)
{
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"radonkit: tomographic reconstruction from Radon data"};
    app.require_subcommand(1);
    Options o;

    auto* phantom_cmd = app.add_subcommand("phantom", "rasterize a builtin phantom");
    phantom_cmd->add_option("--name", o.phantom, "builtin phantom");
    add_output(phantom_cmd, o);

    auto* sino_cmd = app.add_subcommand("sinogram", "sample the Radon transform of a phantom");
    add_sampling(sino_cmd, o);
    sino_cmd->add_option("--out", o.out, "sinogram CSV path")->required();
    sino_cmd->add_option("--report", o.report, "key=value report path");

    auto* recon_cmd = app.add_subcommand("reconstruct", "reconstruct an image");
    recon_cmd->require_subcommand(1);
    CLI::App* recon_sub[3];
    const char* recon_names[3] = {"fbp", "art", "kernel"};
    for (int i = 0; i < 3; ++i) {
        recon_sub[i] = recon_cmd->add_subcommand(recon_names[i], std::string(recon_names[i]) + " reconstruction");
        add_sampling(recon_sub[i], o);
        add_output(recon_sub[i], o);
        recon_sub[i]->add_option("--sinogram", o.sinogram, "read data from a sinogram CSV");
    }
    add_fbp(recon_sub[0], o);
    add_art(recon_sub[1], o);
    add_kernel(recon_sub[2], o);

    SweepSpec sweep;
    std::string sweep_algo = "kernel";
    auto* sweep_cmd = app.add_subcommand("sweep", "RMSE / rcond / time over a parameter range");
    sweep_cmd->add_option("--param", sweep.param, "eps | nu | rho | L | L2 | h | lambda")->required();
    sweep_cmd->add_option("--start", sweep.start)->required();
    sweep_cmd->add_option("--stop", sweep.stop)->required();
    sweep_cmd->add_option("--step", sweep.step)->required();
    sweep_cmd->add_option("--metric", sweep.metric, "rmse | rcond | time");
    sweep_cmd->add_option("--recon", sweep_algo, "fbp | art | kernel");
    add_sampling(sweep_cmd, o);
    sweep_cmd->add_option("--size", o.size, "image side K");
    sweep_cmd->add_option("--out", o.out, "CSV path (stdout when omitted)");
    sweep_cmd->add_option("--sinogram", o.sinogram, "read data from a sinogram CSV");
    add_fbp(sweep_cmd, o);
    add_art(sweep_cmd, o);
    add_kernel(sweep_cmd, o);

    auto* eval_cmd = app.add_subcommand("eval", "compare images");
    eval_cmd->require_subcommand(1);
    auto* rmse_cmd = eval_cmd->add_subcommand("rmse", "root-mean-square error of two CSV images");
    std::string image_a, image_b;
    rmse_cmd->add_option("image", image_a, "image CSV")->required();
    rmse_cmd->add_option("reference", image_b, "reference image CSV");
    rmse_cmd->add_option("--phantom", o.phantom, "compare against this rasterized phantom instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (phantom_cmd->parsed()) {
            if (o.out.empty()) throw std::invalid_argument("--out is required");
            const ImageGrid img = rasterize(builtin(o.phantom), o.size);
            write_image(img, o.out, output_format(o));
            if (!o.report.empty())
                write_report(o.report, {{"command", "phantom"}, {"phantom", o.phantom},
                                        {"size", std::to_string(o.size)}, {"out", o.out}});
            log_stage("phantom " + o.phantom + " written to " + o.out);
            return 0;
        }
        if (sino_cmd->parsed()) {
            ReconConfig cfg = build_config(o, Algorithm::fbp);
            const Sinogram sino = make_sinogram(cfg);
            save_sinogram(sino, o.out);
            if (!o.report.empty()) {
                Report r{{"command", command_line(argc, argv)}};
                for (auto& kv : config_fields(cfg))
                    if (kv.first.rfind("fbp.", 0) != 0 && kv.first != "algorithm" && kv.first != "size")
                        r.push_back(kv);
                r.emplace_back("rows", std::to_string(sino.values.size()));
                write_report(o.report, r);
            }
            log_stage("sinogram with " + std::to_string(sino.values.size()) + " lines written to " + o.out);
            return 0;
        }
        if (recon_cmd->parsed()) {
            Algorithm algo = Algorithm::fbp;
            for (int i = 0; i < 3; ++i)
                if (recon_sub[i]->parsed()) algo = parse_algorithm(recon_names[i]);
            if (o.out.empty()) throw std::invalid_argument("--out is required");
            const ReconConfig cfg = build_config(o, algo);
            log_stage("reconstructing with " + to_string(algo));
            const ReconResult res = run_reconstruction(cfg);
            write_image(res.image, o.out, output_format(o));
            log_stage("image written to " + o.out + " in " + format_double(res.seconds) + " s");
            if (res.rmse) log_stage("rmse " + format_double(*res.rmse));
            if (!o.report.empty()) {
                Report r{{"command", command_line(argc, argv)}};
                for (auto& kv : config_fields(cfg)) r.push_back(kv);
                for (auto& kv : res.info) r.push_back(kv);
                r.emplace_back("out", o.out);
                if (res.rmse) r.emplace_back("rmse", format_double(*res.rmse));
                if (res.rcond) r.emplace_back("rcond", format_double(*res.rcond));
                r.emplace_back("time_s", format_double(res.seconds));
                write_report(o.report, r);
            }
            return 0;
        }
        if (sweep_cmd->parsed()) {
            sweep.base = build_config(o, parse_algorithm(sweep_algo));
            log_stage("sweeping " + sweep.param);
            const auto rows = run_sweep(sweep);
            const std::string csv = sweep_to_csv(sweep, rows);
            if (o.out.empty()) std::cout << csv;
            else write_text(o.out, csv);
            return 0;
        }
        if (rmse_cmd->parsed()) {
            const ImageGrid a = read_image_csv(image_a);
            const ImageGrid b = image_b.empty() ? rasterize(builtin(o.phantom), a.K) : read_image_csv(image_b);
            std::cout << format_double(rmse(a, b)) << "\n";
            return 0;
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
