#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "wavelag/laguerre.hpp"

namespace wavelag {

/// Lower-triangular Toeplitz operator, entry (i, j) = col[i - j] for j <= i.
class LowerToeplitz {
public:
    explicit LowerToeplitz(std::vector<double> first_column);

    std::size_t size() const noexcept { return col_.size(); }
    std::span<const double> column() const noexcept { return col_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return j <= i ? col_[i - j] : 0.0; }

    /// Leading m x m block, itself lower-triangular Toeplitz.
    LowerToeplitz leading(std::size_t m) const;

    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> x) const;

private:
    std::vector<double> col_;
};

/// Matrix of Laplace convolution with g in the Laguerre basis:
/// col[0] = g_0, col[i] = g_i - g_{i-1}.
LowerToeplitz build_G(const LagCoeffs& g, int m);

/// Forward substitution for G x = rhs. Throws SingularOperator when the
/// diagonal vanishes.
std::vector<double> solve_lower(const LowerToeplitz& G, std::span<const double> rhs);

/// Back substitution for G^T x = rhs.
std::vector<double> solve_upper_transposed(const LowerToeplitz& G, std::span<const double> rhs);

struct PowerIterationOptions {
    double tolerance = 1e-10;
    int max_iterations = 10000;
    std::uint64_t seed = 20170301;
};

/// ||G^{-1}||_2, by power iteration on G^{-T} G^{-1} applied through two
/// triangular solves per step. `start` seeds the iteration when nonempty.
double inverse_spectral_norm(const LowerToeplitz& G, const PowerIterationOptions& options = {},
                             std::span<const double> start = {});

/// Norms of (G^(m))^{-1} for m = 0..max_m; index 0 is the empty operator.
struct InverseNormTable {
    std::size_t max_m = 0;
    std::vector<double> spectral;
    std::vector<double> frobenius;
};

InverseNormTable inverse_norms(const LagCoeffs& g, int max_m, const PowerIterationOptions& options = {});

/// max{m : ||(G^(m))^{-1}|| <= eps^{-2}}, clamped to [1, min(max_m, cap)].
int select_M(const InverseNormTable& norms, double eps, int cap = std::numeric_limits<int>::max());

}  // namespace wavelag
