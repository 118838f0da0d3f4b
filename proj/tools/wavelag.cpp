// Command-line front end: simulate, deconvolve, bench-table1, norms, smooth.
//
// Exit codes: 0 success, 1 usage or invalid input, 2 file errors,
// 3 numerical failures (singular kernel, non-convergence).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "wavelag/errors.hpp"
#include "wavelag/estimator.hpp"
#include "wavelag/io.hpp"
#include "wavelag/laguerre.hpp"
#include "wavelag/simulate.hpp"
#include "wavelag/toeplitz.hpp"

namespace fs = std::filesystem;
using namespace wavelag;
using nlohmann::json;

namespace {

std::optional<int> parse_auto_int(const std::string& text, const char* flag) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string(flag) + " expects 'auto' or an integer, got '" + text + "'");
}

std::optional<double> parse_auto_double(const std::string& text, const char* flag) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string(flag) + " expects 'auto' or a number, got '" + text + "'");
}

double parse_snr(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos == text.size() && v > 0.0) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument("--snr expects a positive number or 'inf', got '" + text + "'");
}

NoiseEstimator parse_sigma_method(const std::string& text) {
    if (text == "mad") return NoiseEstimator::Mad;
    if (text == "sd") return NoiseEstimator::StdDev;
    throw InvalidArgument("--sigma-method expects 'mad' or 'sd'");
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_text_file(path, text);
}

// Kernel from a sampled series (optionally Laguerre-smoothed) or from
// Laguerre coefficients, as coefficients of length at least `order`.
struct KernelSource {
    std::string series_path;
    std::string coeffs_path;
    int smooth_order = 0;
};

std::vector<double> load_kernel_series(const KernelSource& k, const TimeGrid& grid) {
    const auto s = read_series(k.series_path);
    if (!(grid_of(s) == grid)) {
        std::ostringstream msg;
        msg << "kernel '" << k.series_path << "' is sampled on n=" << s.t.size() << ", T=" << s.t.back()
            << " but the data grid is n=" << grid.size() << ", T=" << grid.horizon();
        throw InvalidArgument(msg.str());
    }
    if (k.smooth_order > 0) return smooth_series(s.values, tabulate_basis(k.smooth_order, grid));
    return s.values;
}

int run_simulate(const std::string& function, const std::string& snr_text, std::uint64_t seed, std::size_t n,
                 double T, std::size_t n1, std::size_t n2, const fs::path& out) {
    const auto id = parse_test_function(function);
    const double snr = parse_snr(snr_text);
    const TimeGrid grid(n, T);
    fs::create_directories(out);

    const Cube f = eval_test_function(id, grid, n1, n2);
    Series g{grid.points(), {}};
    for (double t : g.t) g.values.push_back(std::exp(-t / 2.0));
    const Cube q = forward_convolve(f, g.values, {1.0, eval_test_function_origin(id, n1, n2)});
    const auto noisy = add_noise(q, snr, seed);

    write_cube(out / "f.json", f);
    write_cube(out / "q.json", q);
    write_cube(out / "Y.json", noisy.Y);
    write_series(out / "g.csv", g);
    const json manifest = {{"command", "simulate"},
                           {"function", function},
                           {"snr", std::isinf(snr) ? json("inf") : json(snr)},
                           {"seed", seed},
                           {"n", n},
                           {"T", T},
                           {"n1", n1},
                           {"n2", n2},
                           {"kernel", "exp(-t/2)"},
                           {"sigma", noisy.sigma},
                           {"files", {{"truth", "f.json"}, {"clean", "q.json"}, {"noisy", "Y.json"}, {"kernel", "g.csv"}}}};
    write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << (out / "Y.json").string() << " (sigma = " << noisy.sigma << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet-Laguerre Laplace deconvolution of noisy image sequences"};
    app.require_subcommand(1);

    // simulate
    std::string sim_function, sim_snr = "3", sim_out;
    std::uint64_t sim_seed = 1;
    std::size_t sim_n = 32, sim_n1 = 32, sim_n2 = 32;
    double sim_T = 5.0;
    auto* sim = app.add_subcommand("simulate", "Generate truth f, clean q = g*f and noisy Y cubes");
    sim->add_option("--function", sim_function, "Test function f1..f4")
        ->required()
        ->check(CLI::IsMember({"f1", "f2", "f3", "f4"}));
    sim->add_option("--snr", sim_snr, "Signal-to-noise ratio sd(q)/sigma, or inf");
    sim->add_option("--seed", sim_seed, "Noise seed");
    sim->add_option("--n", sim_n, "Time samples");
    sim->add_option("--T", sim_T, "Time horizon");
    sim->add_option("--n1", sim_n1, "Rows");
    sim->add_option("--n2", sim_n2, "Columns");
    sim->add_option("--out", sim_out, "Output directory")->required();

    // deconvolve
    std::string dec_input, dec_out, dec_M = "auto", dec_eps = "auto", dec_J1 = "auto", dec_J2 = "auto";
    std::string dec_wavelet = "db2", dec_sigma = "mad", dec_diag;
    KernelSource dec_kernel;
    EstimatorConfig dec_cfg;
    bool dec_no_threshold = false;
    auto* dec = app.add_subcommand("deconvolve", "Estimate f from Y and a known kernel");
    dec->add_option("--input", dec_input, "Cube header of the observations")->required();
    auto* k_series = dec->add_option("--kernel", dec_kernel.series_path, "Kernel samples, CSV t,value");
    auto* k_coeffs = dec->add_option("--kernel-coeffs", dec_kernel.coeffs_path, "Kernel Laguerre coefficients, CSV l,value");
    k_series->excludes(k_coeffs);
    dec->add_option("--out", dec_out, "Cube header for the estimate")->required();
    dec->add_option("--M", dec_M, "Laguerre order, or auto");
    dec->add_option("--M-cap", dec_cfg.M_cap, "Upper bound for the automatic order");
    dec->add_option("--nu", dec_cfg.nu, "Threshold constant");
    dec->add_option("--A", dec_cfg.A, "Radius in the resolution-level rule");
    dec->add_flag("--no-threshold", dec_no_threshold, "Skip hard thresholding");
    dec->add_option("--eps", dec_eps, "Noise level, or auto");
    dec->add_flag("--symmetrize", dec_cfg.symmetrize, "Reflect-extend to a dyadic size and crop back");
    dec->add_option("--smooth-kernel", dec_kernel.smooth_order, "Laguerre-smooth the kernel with this many functions");
    dec->add_option("--J1", dec_J1, "Resolution level along x1, or auto");
    dec->add_option("--J2", dec_J2, "Resolution level along x2, or auto");
    dec->add_option("--wavelet", dec_wavelet, "haar, db1..db4");
    dec->add_option("--sigma-method", dec_sigma, "mad or sd");
    dec->add_option("--diagnostics", dec_diag, "Diagnostics JSON path (default: <out stem>.diagnostics.json)");

    // bench-table1
    SimConfig bench_sim;
    std::string bench_out;
    double bench_nu = EstimatorConfig{}.nu;
    auto* bench = app.add_subcommand("bench-table1", "Monte Carlo replication of the simulation study");
    bench->add_option("--runs", bench_sim.runs, "Replicates per cell");
    bench->add_option("--seed", bench_sim.seed, "Master seed; replicate i uses seed + i");
    bench->add_option("--nu", bench_nu, "Threshold constant");
    bench->add_option("--out", bench_out, "CSV output (default: stdout)");

    // norms
    KernelSource norms_kernel;
    int norms_max_m = 64;
    std::string norms_out;
    auto* nrm = app.add_subcommand("norms", "Inverse norms of the convolution operator against m");
    auto* n_series = nrm->add_option("--kernel", norms_kernel.series_path, "Kernel samples, CSV t,value");
    auto* n_coeffs = nrm->add_option("--kernel-coeffs", norms_kernel.coeffs_path, "Kernel Laguerre coefficients");
    n_series->excludes(n_coeffs);
    nrm->add_option("--max-m", norms_max_m, "Largest operator size");
    nrm->add_option("--out", norms_out, "CSV output (default: stdout)");

    // smooth
    std::string sm_kernel, sm_out, sm_coeffs;
    int sm_order = 8;
    auto* smooth = app.add_subcommand("smooth", "Laguerre smoothing of a sampled curve");
    smooth->add_option("--kernel", sm_kernel, "Input CSV t,value")->required();
    smooth->add_option("--M", sm_order, "Number of Laguerre functions");
    smooth->add_option("--out", sm_out, "Smoothed CSV t,value")->required();
    smooth->add_option("--coeffs-out", sm_coeffs, "Also write the Laguerre coefficients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*sim) return run_simulate(sim_function, sim_snr, sim_seed, sim_n, sim_T, sim_n1, sim_n2, sim_out);

        if (*dec) {
            if (dec_kernel.series_path.empty() == dec_kernel.coeffs_path.empty())
                throw InvalidArgument("deconvolve needs exactly one of --kernel and --kernel-coeffs");
            dec_cfg.M = parse_auto_int(dec_M, "--M");
            dec_cfg.eps = parse_auto_double(dec_eps, "--eps");
            dec_cfg.J1 = parse_auto_int(dec_J1, "--J1");
            dec_cfg.J2 = parse_auto_int(dec_J2, "--J2");
            dec_cfg.threshold = !dec_no_threshold;
            dec_cfg.sigma_method = parse_sigma_method(dec_sigma);
            WaveletSpec spec;
            spec.filter = wavelet_by_name(dec_wavelet);

            const Cube Y = read_cube(dec_input);
            DeconvolutionResult r = dec_kernel.coeffs_path.empty()
                                        ? deconvolve(Y, load_kernel_series(dec_kernel, Y.grid()), spec, dec_cfg)
                                        : deconvolve(Y, read_coeffs(dec_kernel.coeffs_path), spec, dec_cfg);
            for (const auto& w : r.diagnostics.warnings) std::cerr << "warning: " << w << '\n';
            const fs::path out(dec_out);
            write_cube(out, r.estimate);
            const fs::path diag = dec_diag.empty() ? out.parent_path() / (out.stem().string() + ".diagnostics.json")
                                                   : fs::path(dec_diag);
            write_text_file(diag, to_json(r.diagnostics).dump(2) + "\n");
            std::cout << "M = " << r.diagnostics.M << ", J = (" << r.diagnostics.J1 << ", " << r.diagnostics.J2
                      << "), eps = " << r.diagnostics.eps << "\n";
            return 0;
        }

        if (*bench) {
            auto est = table1_estimator_config(bench_sim);
            est.nu = bench_nu;
            const auto rows = run_table1(bench_sim, est);
            std::ostringstream csv;
            write_table1_csv(csv, rows);
            if (bench_out.empty()) {
                std::cout << csv.str();
            } else {
                write_text_file(bench_out, csv.str());
                for (const auto& row : rows) {
                    char line[160];
                    std::snprintf(line, sizeof line, "%s  SNR=%-2g  %.4f (%.4f)   published %.4f (%.4f)   ratio %.2f\n",
                                  to_string(row.function).c_str(), row.snr, row.mean_delta, row.stderr_,
                                  row.published ? row.published->mean : NAN, row.published ? row.published->stderr_ : NAN,
                                  row.published ? row.mean_delta / row.published->mean : NAN);
                    std::cout << line;
                }
            }
            return 0;
        }

        if (*nrm) {
            if (norms_kernel.series_path.empty() == norms_kernel.coeffs_path.empty())
                throw InvalidArgument("norms needs exactly one of --kernel and --kernel-coeffs");
            if (norms_max_m < 1) throw InvalidArgument("--max-m must be at least 1");
            LagCoeffs g;
            if (!norms_kernel.coeffs_path.empty()) {
                g = read_coeffs(norms_kernel.coeffs_path);
                if (g.size() < static_cast<std::size_t>(norms_max_m)) g.values.resize(static_cast<std::size_t>(norms_max_m), 0.0);
            } else {
                const auto s = read_series(norms_kernel.series_path);
                g = project(s.values, tabulate_basis(norms_max_m, grid_of(s)));
            }
            const auto table = inverse_norms(g, norms_max_m);
            std::ostringstream csv;
            write_norms_csv(csv, table);
            write_or_print(norms_out, csv.str());
            auto& info = norms_out.empty() ? std::cerr : std::cout;
            const auto mm = static_cast<std::size_t>(norms_max_m);
            const std::size_t first = std::min<std::size_t>(8, mm > 1 ? mm - 1 : 1);
            if (mm >= 2) {
                std::vector<double> frob_sq(table.frobenius.size());
                for (std::size_t m = 0; m < frob_sq.size(); ++m) frob_sq[m] = table.frobenius[m] * table.frobenius[m];
                info << "log-log slope of frobenius^2 over m = " << first << ".." << mm << ": "
                     << loglog_slope(frob_sq, first, mm) << '\n';
            }
            return 0;
        }

        if (*smooth) {
            const auto s = read_series(sm_kernel);
            const auto basis = tabulate_basis(sm_order, grid_of(s));
            const auto c = project(s.values, basis);
            write_series(sm_out, {s.t, reconstruct(c, basis)});
            if (!sm_coeffs.empty()) write_coeffs(sm_coeffs, c);
            return 0;
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
