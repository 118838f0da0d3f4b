#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavelag/cube.hpp"
#include "wavelag/laguerre.hpp"
#include "wavelag/toeplitz.hpp"
#include "wavelag/wavelet2d.hpp"

namespace wavelag {

/// Wavelet-Laguerre coefficients theta_{l; omega}: one wavelet coefficient
/// image (layout of WaveletCoeffs2D) per Laguerre order l, stored l-major.
struct CoeffTensor {
    std::size_t M = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    int levels1 = 0;
    int levels2 = 0;
    std::vector<double> values;

    CoeffTensor() = default;
    CoeffTensor(std::size_t M, std::size_t n1, std::size_t n2, int levels1, int levels2);

    double& operator()(std::size_t l, std::size_t p1, std::size_t p2) { return values[(l * n1 + p1) * n2 + p2]; }
    double operator()(std::size_t l, std::size_t p1, std::size_t p2) const {
        return values[(l * n1 + p1) * n2 + p2];
    }

    int level1(std::size_t p1) const { return coefficient_level(p1, n1, levels1); }
    int level2(std::size_t p2) const { return coefficient_level(p2, n2, levels2); }
    bool is_scaling(std::size_t p1, std::size_t p2) const { return level1(p1) < 0 && level2(p2) < 0; }
};

struct EstimatorConfig {
    /// Laguerre order; empty selects it from the inverse-norm rule.
    std::optional<int> M;
    /// Upper bound for the automatic order (further capped by the grid size).
    int M_cap = 64;
    /// Spatial truncation levels; empty applies 2^J = A^2 / eps^2.
    std::optional<int> J1;
    std::optional<int> J2;
    /// Threshold constant. Calibrated on the simulation study at M = 8.
    double nu = 0.15;
    double A = 1.0;
    /// Noise level; empty uses eps_hat = T * sigma_hat / sqrt(n).
    std::optional<double> eps;
    bool threshold = true;
    NoiseEstimator sigma_method = NoiseEstimator::Mad;
    /// Reflect-extend each spatial side to the next power of two strictly
    /// above it and crop the estimate back.
    bool symmetrize = false;
};

struct Diagnostics {
    double eps = 0.0;
    double eps_hat = 0.0;
    double sigma_hat = 0.0;
    int M = 0;
    int J1 = 0;
    int J2 = 0;
    std::size_t work_n1 = 0;
    std::size_t work_n2 = 0;
    std::vector<double> thresholds;
    std::vector<std::size_t> keep_counts;
    std::vector<std::string> warnings;
};

struct DeconvolutionResult {
    Cube estimate;
    Diagnostics diagnostics;
};

/// Per-slice 2D DWT followed by Laguerre projection of every coefficient's
/// time series, giving qhat_{l; omega} for l < basis order.
CoeffTensor analyze(const Cube& Y, const WaveletSpec& spec, const LaguerreBasis& basis,
                    Origin origin = Origin::Extrapolate);

/// Inverse of analyze up to projection: Laguerre synthesis per coefficient,
/// then inverse DWT per slice.
Cube synthesize(const CoeffTensor& theta, const WaveletSpec& spec, const LaguerreBasis& basis);

/// Median over time slices of the finest-scale noise estimate.
double estimate_sigma_cube(const Cube& Y, const WaveletSpec& spec, NoiseEstimator method = NoiseEstimator::Mad);

/// eps_hat = T * sigma_hat / sqrt(n).
double estimate_eps(const Cube& Y, const WaveletSpec& spec, NoiseEstimator method = NoiseEstimator::Mad);

/// lambda_l = 2 eps sqrt(2 nu log(1/eps) / (l v 1)) ||(G^(l v 1))^{-1}|| for
/// l < M. For eps >= 1 the logarithm is floored at zero, giving zero thresholds.
std::vector<double> thresholds(int M, double eps, double nu, const InverseNormTable& norms);

struct ThresholdResult {
    CoeffTensor tensor;
    std::vector<std::size_t> keep_counts;  ///< nonzero survivors per l
};

/// Keeps theta_{l; omega} iff |theta| > lambda_l. Pure scaling coefficients
/// are kept unconditionally when `keep_scaling` is set.
ThresholdResult hard_threshold(const CoeffTensor& tensor, std::span<const double> lambdas, bool keep_scaling = true);

/// Zeroes detail coefficients at level j >= J along either axis.
void truncate_levels(CoeffTensor& tensor, int J1, int J2);

/// J with 2^J <= A^2 / eps^2, clamped to [0, max_level]; eps = 0 gives max_level.
int resolution_level(double eps, double A, int max_level);

/// Full pipeline for a kernel sampled on Y's grid.
DeconvolutionResult deconvolve(const Cube& Y, std::span<const double> g_series, const WaveletSpec& spec,
                               const EstimatorConfig& cfg);

/// Full pipeline for a kernel given by its Laguerre coefficients.
DeconvolutionResult deconvolve(const Cube& Y, const LagCoeffs& g_coeffs, const WaveletSpec& spec,
                               const EstimatorConfig& cfg);

}  // namespace wavelag
