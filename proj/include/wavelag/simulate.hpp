#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavelag/cube.hpp"
#include "wavelag/estimator.hpp"

namespace wavelag {

/// Test functions of the simulation study. With a(x) = (x1-.5)^2 (x2-.5)^2
/// and b(t,x) = exp(-t/2) cos(2 pi x1 x2):
///   f1 = t exp(-t) a(x),  f2 = b,  f3 = f1 + f2,  f4 = b + a(x).
enum class TestFunction { F1, F2, F3, F4 };

TestFunction parse_test_function(std::string_view name);
std::string to_string(TestFunction id);

double eval_test_function(TestFunction id, double t, double x1, double x2);

/// Spatial sample positions x_i = i / n, i = 1..n.
std::vector<double> spatial_points(std::size_t n);

/// Samples on the grid points t_k (k >= 1) and spatial points.
Cube eval_test_function(TestFunction id, const TimeGrid& grid, std::size_t n1, std::size_t n2);
/// The t = 0 slice, which the sampling grid omits.
Image eval_test_function_origin(TestFunction id, std::size_t n1, std::size_t n2);

/// Values at t = 0 that the grid does not sample. Missing entries are
/// obtained by linear extrapolation from the first two samples.
struct ConvolveOrigin {
    std::optional<double> g0;
    std::optional<Image> f0;
};

/// q(t_k, x) = int_0^{t_k} g(t_k - z) f(z, x) dz by the trapezoid rule on the
/// nodes 0, t_1, .., t_k.
Cube forward_convolve(const Cube& f, std::span<const double> g_series, const ConvolveOrigin& origin = {});

struct NoisyCube {
    Cube Y;
    double sigma = 0.0;
};

/// Adds i.i.d. N(0, sigma^2) with sigma = sd(q) / snr (population sd over all
/// samples). snr = +inf returns q unchanged.
NoisyCube add_noise(const Cube& q, double snr, std::uint64_t seed);

/// Adds i.i.d. N(0, sigma^2) with an explicit sigma.
Cube add_gaussian_noise(const Cube& q, double sigma, std::uint64_t seed);

/// Population standard deviation of all samples.
double sample_sd(const Cube& c);

/// ||fhat - f|| / ||f|| with uniform quadrature weights.
double relative_error(const Cube& fhat, const Cube& f);

struct SimConfig {
    std::size_t n = 32;
    double T = 5.0;
    std::size_t n1 = 32;
    std::size_t n2 = 32;
    std::vector<TestFunction> functions{TestFunction::F1, TestFunction::F2, TestFunction::F3, TestFunction::F4};
    std::vector<double> snrs{3.0, 5.0, 7.0};
    std::uint64_t seed = 1;
    int runs = 100;
    bool noiseless = false;
};

/// Estimator settings used for the simulation study: M = 8, full spatial depth.
EstimatorConfig table1_estimator_config(const SimConfig& sim);

struct PublishedValue {
    double mean;
    double stderr_;
};

/// Published mean relative error (and its standard error) for snr in {3, 5, 7}.
std::optional<PublishedValue> published_table1(TestFunction id, double snr);

struct Table1Row {
    TestFunction function;
    double snr;
    double mean_delta;
    double stderr_;
    int runs;
    std::uint64_t seed;
    std::optional<PublishedValue> published;
};

/// Replicate i of every cell uses seed + i.
std::vector<Table1Row> run_table1(const SimConfig& sim, const EstimatorConfig& est);

/// Relative errors of the individual replicates for one cell.
std::vector<double> replicate_errors(const SimConfig& sim, const EstimatorConfig& est, TestFunction id, double snr);

}  // namespace wavelag
