#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wavelag/image.hpp"

namespace wavelag {

/// Orthogonal compactly supported wavelet given by its lowpass taps
/// (normalised so that sum h = sqrt(2)). The highpass filter is the
/// alternating flip g[k] = (-1)^k h[L-1-k].
struct WaveletFilter {
    std::string name;
    std::vector<double> lowpass;
};

/// Daubechies filter with the given number of vanishing moments (1..4);
/// db1 is the Haar filter, db2 the 4-tap default.
WaveletFilter daubechies(int vanishing_moments);

/// "haar", "db1".."db4".
WaveletFilter wavelet_by_name(std::string_view name);

/// Throws InvalidArgument unless the taps satisfy the orthogonality
/// conditions (unit energy, sum sqrt(2), double-shift orthogonality) to 1e-12.
void validate_filter(const std::vector<double>& lowpass);

/// Decomposition depths along x1 (rows) and x2 (columns); a negative depth
/// selects the full dyadic depth of that side.
struct WaveletSpec {
    WaveletFilter filter = daubechies(2);
    int levels1 = -1;
    int levels2 = -1;
};

/// Periodized tensor-product wavelet coefficients of an image.
///
/// Along each axis of length N = 2^p decomposed L times, the 1D layout is the
/// scaling block (N >> L entries), then detail blocks from the finest level
/// j = p-1 (N/2 entries) down to the coarsest j = p-L. The 2D array is the
/// tensor product of the two 1D layouts, row-major: entry (p1, p2) is the
/// coefficient of psi_{j1,k1}(x1) psi_{j2,k2}(x2).
struct WaveletCoeffs2D {
    Image values;
    int levels1 = 0;
    int levels2 = 0;

    /// Resolution level of 1D position p along x1 / x2, -1 for scaling entries.
    int level1(std::size_t p) const;
    int level2(std::size_t p) const;
    /// Translation index k within the level block.
    std::size_t shift1(std::size_t p) const;
    std::size_t shift2(std::size_t p) const;
};

/// log2(n) for a power of two, InvalidArgument otherwise.
int dyadic_log2(std::size_t n);

/// Level of position p in the 1D layout of length n with `levels` decompositions.
int coefficient_level(std::size_t p, std::size_t n, int levels);
std::size_t coefficient_shift(std::size_t p, std::size_t n, int levels);

/// Forward and inverse periodized 1D transforms, layout as above.
std::vector<double> dwt1(std::vector<double> signal, const WaveletFilter& filter, int levels);
std::vector<double> idwt1(std::vector<double> coeffs, const WaveletFilter& filter, int levels);

WaveletCoeffs2D dwt2(const Image& image, const WaveletSpec& spec);
Image idwt2(const WaveletCoeffs2D& coeffs, const WaveletSpec& spec);

enum class NoiseEstimator {
    Mad,     ///< median absolute deviation / 0.6745
    StdDev,  ///< sample standard deviation
};

/// Noise scale from the finest-level (detail x detail) coefficients.
double estimate_sigma(const Image& image, const WaveletSpec& spec, NoiseEstimator method = NoiseEstimator::Mad);

/// Even reflection across the far edge of each axis: 2 n1 x 2 n2, invariant
/// under flips about both axes.
Image symmetrize(const Image& image);

/// Top-left rows x cols quadrant.
Image restrict_quadrant(const Image& image, std::size_t rows, std::size_t cols);

/// Even-periodic extension (period 2n per axis) of an image to rows x cols.
/// Requires rows <= 2 n1 and cols <= 2 n2; restrict_quadrant undoes it.
Image reflect_extend(const Image& image, std::size_t rows, std::size_t cols);

/// Smallest power of two strictly greater than n.
std::size_t next_dyadic_above(std::size_t n);

}  // namespace wavelag
