#include "wavelag/simulate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "wavelag/errors.hpp"

namespace wavelag {

TestFunction parse_test_function(std::string_view name) {
    if (name == "f1") return TestFunction::F1;
    if (name == "f2") return TestFunction::F2;
    if (name == "f3") return TestFunction::F3;
    if (name == "f4") return TestFunction::F4;
    throw InvalidArgument("unknown test function '" + std::string(name) + "' (expected f1, f2, f3 or f4)");
}

std::string to_string(TestFunction id) {
    switch (id) {
        case TestFunction::F1: return "f1";
        case TestFunction::F2: return "f2";
        case TestFunction::F3: return "f3";
        case TestFunction::F4: return "f4";
    }
    return "?";
}

double eval_test_function(TestFunction id, double t, double x1, double x2) {
    const double a = (x1 - 0.5) * (x1 - 0.5) * (x2 - 0.5) * (x2 - 0.5);
    const double b = std::exp(-t / 2.0) * std::cos(2.0 * std::numbers::pi * x1 * x2);
    switch (id) {
        case TestFunction::F1: return t * std::exp(-t) * a;
        case TestFunction::F2: return b;
        case TestFunction::F3: return t * std::exp(-t) * a + b;
        case TestFunction::F4: return b + a;
    }
    throw InvalidArgument("unknown test function");
}

std::vector<double> spatial_points(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return x;
}

Cube eval_test_function(TestFunction id, const TimeGrid& grid, std::size_t n1, std::size_t n2) {
    Cube f(grid, n1, n2);
    const auto x1 = spatial_points(n1);
    const auto x2 = spatial_points(n2);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.point(k);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j) f(k, i, j) = eval_test_function(id, t, x1[i], x2[j]);
    }
    return f;
}

Image eval_test_function_origin(TestFunction id, std::size_t n1, std::size_t n2) {
    Image img(n1, n2);
    const auto x1 = spatial_points(n1);
    const auto x2 = spatial_points(n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) img(i, j) = eval_test_function(id, 0.0, x1[i], x2[j]);
    return img;
}

Cube forward_convolve(const Cube& f, std::span<const double> g_series, const ConvolveOrigin& origin) {
    const std::size_t n = f.n();
    if (g_series.size() != n)
        throw InvalidArgument("kernel has " + std::to_string(g_series.size()) + " samples, cube has " +
                              std::to_string(n) + " time points");
    const std::size_t plane = f.n1() * f.n2();
    const double h = f.grid().step();

    // G[m] = g(m h), F[m] = f(m h) for m = 0..n.
    std::vector<double> G(n + 1);
    G[0] = origin.g0 ? *origin.g0 : (n >= 2 ? 2.0 * g_series[0] - g_series[1] : g_series[0]);
    std::copy(g_series.begin(), g_series.end(), G.begin() + 1);

    std::vector<double> F((n + 1) * plane);
    const auto data = f.data();
    std::copy(data.begin(), data.end(), F.begin() + static_cast<std::ptrdiff_t>(plane));
    if (origin.f0) {
        if (origin.f0->rows != f.n1() || origin.f0->cols != f.n2())
            throw InvalidArgument("origin slice shape does not match the cube");
        std::copy(origin.f0->data.begin(), origin.f0->data.end(), F.begin());
    } else {
        for (std::size_t p = 0; p < plane; ++p)
            F[p] = n >= 2 ? 2.0 * data[p] - data[plane + p] : data[p];
    }

    Cube q(f.grid(), f.n1(), f.n2());
    auto out = q.data();
    for (std::size_t k = 1; k <= n; ++k) {
        double* dst = out.data() + (k - 1) * plane;
        for (std::size_t m = 0; m <= k; ++m) {
            const double w = (m == 0 || m == k) ? 0.5 * h : h;
            const double c = w * G[k - m];
            const double* src = F.data() + m * plane;
            for (std::size_t p = 0; p < plane; ++p) dst[p] += c * src[p];
        }
    }
    return q;
}

double sample_sd(const Cube& c) {
    const auto d = c.data();
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(d.size()));
}

Cube add_gaussian_noise(const Cube& q, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("noise sd must be finite and nonnegative");
    Cube Y = q;
    if (sigma == 0.0) return Y;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, sigma);
    for (auto& v : Y.data()) v += normal(rng);
    return Y;
}

NoisyCube add_noise(const Cube& q, double snr, std::uint64_t seed) {
    if (!(snr > 0.0)) throw InvalidArgument("SNR must be positive");
    if (std::isinf(snr)) return {q, 0.0};
    const double sd = sample_sd(q);
    if (!(sd > 0.0)) throw InvalidArgument("clean signal has zero variance; SNR is undefined");
    const double sigma = sd / snr;
    return {add_gaussian_noise(q, sigma, seed), sigma};
}

double relative_error(const Cube& fhat, const Cube& f) {
    if (!fhat.same_shape(f)) throw InvalidArgument("estimate and truth have different shapes");
    const auto a = fhat.data();
    const auto b = f.data();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    if (den == 0.0) throw InvalidArgument("relative error undefined for a zero reference");
    return std::sqrt(num / den);
}

EstimatorConfig table1_estimator_config(const SimConfig& sim) {
    EstimatorConfig cfg;
    cfg.M = 8;
    cfg.J1 = dyadic_log2(sim.n1);
    cfg.J2 = dyadic_log2(sim.n2);
    return cfg;
}

std::optional<PublishedValue> published_table1(TestFunction id, double snr) {
    static constexpr PublishedValue table[4][3] = {
        {{0.1107, 0.0110}, {0.0694, 0.0066}, {0.0511, 0.0049}},
        {{0.1224, 0.0100}, {0.0761, 0.0071}, {0.0567, 0.0051}},
        {{0.1107, 0.0112}, {0.0680, 0.0068}, {0.0511, 0.0048}},
        {{0.1080, 0.0117}, {0.0690, 0.0058}, {0.0519, 0.0046}},
    };
    int col = -1;
    if (snr == 3.0) col = 0;
    else if (snr == 5.0) col = 1;
    else if (snr == 7.0) col = 2;
    if (col < 0) return std::nullopt;
    return table[static_cast<int>(id)][col];
}

std::vector<double> replicate_errors(const SimConfig& sim, const EstimatorConfig& est, TestFunction id, double snr) {
    if (sim.runs < 1) throw InvalidArgument("need at least one replicate");
    const TimeGrid grid(sim.n, sim.T);
    const Cube f = eval_test_function(id, grid, sim.n1, sim.n2);
    std::vector<double> g(sim.n);
    for (std::size_t k = 0; k < sim.n; ++k) g[k] = std::exp(-grid.point(k) / 2.0);
    const Cube q = forward_convolve(f, g, {1.0, eval_test_function_origin(id, sim.n1, sim.n2)});
    const WaveletSpec spec;

    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(sim.runs));
    for (int r = 0; r < sim.runs; ++r) {
        const Cube Y = sim.noiseless ? q : add_noise(q, snr, sim.seed + static_cast<std::uint64_t>(r)).Y;
        errors.push_back(relative_error(deconvolve(Y, g, spec, est).estimate, f));
    }
    return errors;
}

std::vector<Table1Row> run_table1(const SimConfig& sim, const EstimatorConfig& est) {
    if (sim.runs < 2) throw InvalidArgument("the simulation study needs at least two runs per cell");
    std::vector<Table1Row> rows;
    for (const auto id : sim.functions) {
        for (const double snr : sim.snrs) {
            const auto e = replicate_errors(sim, est, id, snr);
            const double R = static_cast<double>(e.size());
            const double mean = std::accumulate(e.begin(), e.end(), 0.0) / R;
            double ss = 0.0;
            for (double v : e) ss += (v - mean) * (v - mean);
            const double sd = std::sqrt(ss / (R - 1.0));
            rows.push_back({id, snr, mean, sd / std::sqrt(R), sim.runs, sim.seed, published_table1(id, snr)});
        }
    }
    return rows;
}

}  // namespace wavelag
