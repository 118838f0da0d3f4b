// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <sys/wait.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "wavelag/estimator.hpp"
#include "wavelag/io.hpp"
#include "wavelag/laguerre.hpp"
#include "wavelag/quadrature.hpp"
#include "wavelag/simulate.hpp"
#include "wavelag/toeplitz.hpp"
#include "wavelag/wavelet2d.hpp"

using namespace wavelag;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::vector<double> sample(const TimeGrid& g, const std::function<double(double)>& fn) {
    std::vector<double> s(g.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = fn(g.point(k));
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd = std::string(WAVELAG_CLI) + " " + args + " >\"" + stdout_file.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void table1(Outcome& o) {
    SimConfig sim;
    const auto rows = run_table1(sim, table1_estimator_config(sim));
    std::ostringstream table;
    int out_of_band = 0;
    for (const auto& r : rows) {
        const double target = r.published->mean;
        const bool in_band = r.mean_delta >= 0.5 * target && r.mean_delta <= 2.0 * target;
        char line[160];
        std::snprintf(line, sizeof line, "    %s snr=%g mean=%.4f (se %.4f) published=%.4f ratio=%.2f %s\n",
                      to_string(r.function).c_str(), r.snr, r.mean_delta, r.stderr_, target, r.mean_delta / target,
                      in_band ? "in band" : "OUT OF BAND");
        table << line;
        if (!in_band) ++out_of_band;
    }
    o.require(out_of_band == 0, std::to_string(out_of_band) + " of 12 cells outside [0.5x, 2x]");
    for (std::size_t i = 0; i < rows.size(); i += 3) {
        const bool dec = rows[i].mean_delta > rows[i + 1].mean_delta && rows[i + 1].mean_delta > rows[i + 2].mean_delta;
        o.require(dec, to_string(rows[i].function) + " row not strictly decreasing");
    }
    o.detail << "\n" << table.str();
}

void exact_recovery(Outcome& o) {
    const TimeGrid grid(1024, 40.0);
    const Cube f = eval_test_function(TestFunction::F2, grid, 32, 32);
    const auto g = sample(grid, [](double t) { return std::exp(-t / 2.0); });
    const Cube Y = forward_convolve(f, g, {1.0, eval_test_function_origin(TestFunction::F2, 32, 32)});
    EstimatorConfig cfg;
    cfg.M = 8;
    cfg.threshold = false;
    cfg.J1 = 5;
    cfg.J2 = 5;
    const double delta = relative_error(deconvolve(Y, g, WaveletSpec{}, cfg).estimate, f);
    o.detail << " delta=" << delta;
    o.require(delta < 1e-3, "delta < 1e-3");
}

void frobenius_growth(Outcome& o) {
    std::vector<double> phi0(256, 0.0);
    phi0[0] = 1.0;
    const auto norms = inverse_norms(LagCoeffs(phi0), 256);
    std::vector<double> fro2(norms.frobenius.size());
    for (std::size_t m = 1; m < fro2.size(); ++m) fro2[m] = norms.frobenius[m] * norms.frobenius[m];
    const double slope = loglog_slope(fro2, 8, 256);
    o.detail << " slope=" << slope;
    o.require(std::abs(slope - 2.0) <= 0.3, "slope 2 +- 0.3");
    bool dominated = true;
    for (std::size_t m = 1; m <= 256; ++m) dominated = dominated && norms.spectral[m] <= norms.frobenius[m] * (1.0 + 1e-12);
    o.require(dominated, "spectral <= frobenius");
}

double max_rel(const Cube& got, const std::vector<double>& ref) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        num = std::max(num, std::abs(got(k, 0, 0) - ref[k]));
        den = std::max(den, std::abs(ref[k]));
    }
    return num / den;
}

void forward_oracles(Outcome& o) {
    const TimeGrid g(1024, 40.0);
    const auto half = sample(g, [](double t) { return std::exp(-t / 2.0); });
    const double e1 = max_rel(forward_convolve(Cube(g, 1, 1, half), half, {1.0, Image(1, 1, 1.0)}),
                              sample(g, [](double t) { return t * std::exp(-t / 2.0); }));
    const auto te = sample(g, [](double t) { return t * std::exp(-t); });
    const double e2 = max_rel(forward_convolve(Cube(g, 1, 1, te), half, {1.0, Image(1, 1, 0.0)}),
                              sample(g, [](double t) { return std::exp(-t / 2.0) * (4.0 - (2.0 * t + 4.0) * std::exp(-t / 2.0)); }));
    o.detail << " rel_err=" << e1 << "," << e2;
    o.require(e1 <= 1e-3, "exp*exp");
    o.require(e2 <= 1e-3, "t exp(-t) * exp");
}

Eigen::MatrixXd dense(const LowerToeplitz& G) {
    const auto m = static_cast<Eigen::Index>(G.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) A(i, j) = G(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return A;
}

void property_suites(Outcome& o) {
    // Laguerre discrete orthonormality.
    {
        const TimeGrid g(1024, 40.0);
        const auto b = tabulate_basis(10, g);
        const auto w = quadrature_weights(g, Origin::Extrapolate);
        double worst = 0.0;
        for (std::size_t i = 0; i < 10; ++i)
            for (std::size_t j = 0; j < 10; ++j) {
                double ip = 0.0;
                for (std::size_t k = 0; k < g.size(); ++k) ip += w[k] * b(i, k) * b(j, k);
                worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
            }
        o.detail << " gram=" << worst;
        o.require(worst <= 1e-6, "Laguerre Gram within 1e-6 (n=1024, T=40, M=10)");
    }
    // Convolution identity, trapezoid on t in (0, 20] with h = 20/4096.
    {
        const TimeGrid g(4096, 20.0);
        double worst = 0.0;
        for (int k = 0; k <= 9; ++k)
            for (int j = 0; k + j + 1 <= 10; ++j) {
                const auto fk = sample(g, [&](double t) { return eval_laguerre(k, t); });
                const auto gj = sample(g, [&](double t) { return eval_laguerre(j, t); });
                const Cube q = forward_convolve(Cube(g, 1, 1, fk), gj, {1.0, Image(1, 1, 1.0)});
                for (std::size_t m = 0; m < g.size(); ++m) {
                    const double t = g.point(m);
                    worst = std::max(worst, std::abs(q(m, 0, 0) - (eval_laguerre(k + j, t) - eval_laguerre(k + j + 1, t))));
                }
            }
        o.detail << " conv=" << worst;
        o.require(worst <= 1e-4, "convolution identity");
    }
    // Wavelet perfect reconstruction and Parseval.
    {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> nd;
        double recon = 0.0, parseval = 0.0;
        for (int vm = 1; vm <= 4; ++vm) {
            Image img(32, 32);
            for (auto& v : img.data) v = nd(rng);
            WaveletSpec spec;
            spec.filter = daubechies(vm);
            const auto w = dwt2(img, spec);
            const auto back = idwt2(w, spec);
            double e0 = 0.0, e1 = 0.0;
            for (std::size_t i = 0; i < img.data.size(); ++i) {
                recon = std::max(recon, std::abs(back.data[i] - img.data[i]));
                e0 += img.data[i] * img.data[i];
                e1 += w.values.data[i] * w.values.data[i];
            }
            parseval = std::max(parseval, std::abs(e1 - e0) / e0);
        }
        o.detail << " recon=" << recon << " parseval=" << parseval;
        o.require(recon <= 1e-10, "wavelet reconstruction");
        o.require(parseval <= 1e-8, "Parseval");
    }
    // Triangular solve and power iteration against dense oracles.
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        double solve_err = 0.0, norm_err = 0.0;
        for (std::size_t m : {1, 2, 5, 16, 33, 64}) {
            std::vector<double> col(m);
            col[0] = 2.0 + ud(rng);
            for (std::size_t i = 1; i < m; ++i) col[i] = ud(rng) * std::pow(0.6, static_cast<double>(i));
            const LowerToeplitz G(col);
            std::vector<double> rhs(m);
            for (auto& v : rhs) v = ud(rng);
            const auto x = solve_lower(G, rhs);
            const Eigen::VectorXd ref =
                dense(G).triangularView<Eigen::Lower>().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(m)));
            solve_err = std::max(solve_err, (Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(m)) - ref).norm() / ref.norm());

            Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense(G));
            const double exact = 1.0 / svd.singularValues().minCoeff();
            norm_err = std::max(norm_err, std::abs(inverse_spectral_norm(G) - exact) / exact);
            std::vector<double> phi0(m, 0.0);
            phi0[0] = 1.0;
            const auto Gp = build_G(LagCoeffs(phi0), static_cast<int>(m));
            Eigen::JacobiSVD<Eigen::MatrixXd> svdp(dense(Gp));
            const double exact_p = 1.0 / svdp.singularValues().minCoeff();
            norm_err = std::max(norm_err, std::abs(inverse_spectral_norm(Gp) - exact_p) / exact_p);
        }
        o.detail << " solve=" << solve_err << " spectral=" << norm_err;
        o.require(solve_err <= 1e-10, "triangular solve");
        o.require(norm_err <= 1e-6, "power iteration");
    }
}

void rate_direction(Outcome& o) {
    SimConfig sim;
    const auto est = table1_estimator_config(sim);
    const TimeGrid grid(sim.n, sim.T);
    const Cube f = eval_test_function(TestFunction::F2, grid, sim.n1, sim.n2);
    const auto g = sample(grid, [](double t) { return std::exp(-t / 2.0); });
    const Cube q = forward_convolve(f, g, {1.0, eval_test_function_origin(TestFunction::F2, sim.n1, sim.n2)});
    const double sd = sample_sd(q);
    std::vector<double> means;
    for (double c : {0.4, 0.2, 0.1}) {
        double sum = 0.0;
        for (std::uint64_t s = 0; s < 50; ++s)
            sum += relative_error(deconvolve(add_gaussian_noise(q, c * sd, sim.seed + s), g, WaveletSpec{}, est).estimate, f);
        means.push_back(sum / 50.0);
        o.detail << " sigma=" << c << "sd:" << means.back();
    }
    o.require(means[0] > means[1] && means[1] > means[2], "mean delta decreasing in sigma");
}

void reproducibility(Outcome& o) {
    const fs::path tmp = fs::temp_directory_path() / ("wavelag_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(tmp);
    for (const char* d : {"a", "b"}) {
        o.require(run_cli("simulate --function f3 --snr 5 --seed 17 --out \"" + (tmp / d).string() + "\"", tmp / "out.txt") == 0,
                  "simulate exit code");
        o.require(run_cli("bench-table1 --runs 3 --seed 17", tmp / (std::string("bench_") + d + ".csv")) == 0,
                  "bench exit code");
    }
    for (const char* f : {"f.bin", "q.bin", "Y.bin", "f.json", "Y.json", "g.csv", "manifest.json"})
        o.require(slurp(tmp / "a" / f) == slurp(tmp / "b" / f) && !slurp(tmp / "a" / f).empty(),
                  std::string("simulate ") + f + " identical");
    o.require(slurp(tmp / "bench_a.csv") == slurp(tmp / "bench_b.csv") && !slurp(tmp / "bench_a.csv").empty(),
              "bench output identical");

    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    Cube c(TimeGrid(7, 2.5), 5, 6);
    for (auto& v : c.data()) v = nd(rng) * std::pow(10.0, 40.0 * nd(rng));
    write_cube(tmp / "c.json", c);
    const Cube back = read_cube(tmp / "c.json");
    o.require(back.same_shape(c) && std::memcmp(back.data().data(), c.data().data(), c.size() * sizeof(double)) == 0,
              "cube roundtrip bit-exact");
    fs::remove_all(tmp);
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        void (*check)(Outcome&);
    };
    const Criterion criteria[] = {
        {1, "simulation study replication", table1},
        {2, "exact recovery", exact_recovery},
        {3, "inverse Frobenius norm growth", frobenius_growth},
        {4, "forward-model closed forms", forward_oracles},
        {5, "property suites", property_suites},
        {6, "error decreases with noise level", rate_direction},
        {7, "reproducibility", reproducibility},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.check(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", " << secs << " s):"
                  << o.detail.str() << std::endl;
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << std::endl;
    return failures ? 1 : 0;
}
