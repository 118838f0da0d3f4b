#include "wavelag/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "wavelag/errors.hpp"

namespace wavelag {

namespace {

void require_size(const LowerToeplitz& G, std::size_t n, const char* what) {
    if (n != G.size())
        throw InvalidArgument(std::string(what) + ": length " + std::to_string(n) +
                              " does not match operator size " + std::to_string(G.size()));
}

void require_invertible(const LowerToeplitz& G) {
    if (G.size() == 0) throw InvalidArgument("empty operator");
    if (G.column()[0] == 0.0) throw SingularOperator("lower-triangular operator has a zero diagonal (g_0 = 0)");
}

double norm2(std::span<const double> x) { return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0)); }

}  // namespace

LowerToeplitz::LowerToeplitz(std::vector<double> first_column) : col_(std::move(first_column)) {
    if (col_.empty()) throw InvalidArgument("Toeplitz operator needs a nonempty first column");
}

LowerToeplitz LowerToeplitz::leading(std::size_t m) const {
    if (m == 0 || m > col_.size()) throw InvalidArgument("leading block size out of range");
    return LowerToeplitz(std::vector<double>(col_.begin(), col_.begin() + static_cast<std::ptrdiff_t>(m)));
}

std::vector<double> LowerToeplitz::apply(std::span<const double> x) const {
    require_size(*this, x.size(), "apply");
    const std::size_t m = size();
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += col_[i - j] * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<double> LowerToeplitz::apply_transpose(std::span<const double> x) const {
    require_size(*this, x.size(), "apply_transpose");
    const std::size_t m = size();
    std::vector<double> y(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t i = j; i < m; ++i) acc += col_[i - j] * x[i];
        y[j] = acc;
    }
    return y;
}

LowerToeplitz build_G(const LagCoeffs& g, int m) {
    if (m < 1) throw InvalidArgument("operator dimension must be at least 1");
    const auto dim = static_cast<std::size_t>(m);
    if (g.size() < dim)
        throw InvalidArgument("kernel has " + std::to_string(g.size()) + " Laguerre coefficients, need " +
                              std::to_string(dim));
    std::vector<double> col(dim);
    col[0] = g[0];
    for (std::size_t i = 1; i < dim; ++i) col[i] = g[i] - g[i - 1];
    return LowerToeplitz(std::move(col));
}

std::vector<double> solve_lower(const LowerToeplitz& G, std::span<const double> rhs) {
    require_invertible(G);
    require_size(G, rhs.size(), "solve_lower");
    const auto col = G.column();
    const std::size_t m = G.size();
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = rhs[i];
        for (std::size_t j = 0; j < i; ++j) acc -= col[i - j] * x[j];
        x[i] = acc / col[0];
    }
    return x;
}

std::vector<double> solve_upper_transposed(const LowerToeplitz& G, std::span<const double> rhs) {
    require_invertible(G);
    require_size(G, rhs.size(), "solve_upper_transposed");
    const auto col = G.column();
    const std::size_t m = G.size();
    std::vector<double> x(m);
    for (std::size_t jj = m; jj-- > 0;) {
        double acc = rhs[jj];
        for (std::size_t i = jj + 1; i < m; ++i) acc -= col[i - jj] * x[i];
        x[jj] = acc / col[0];
    }
    return x;
}

double inverse_spectral_norm(const LowerToeplitz& G, const PowerIterationOptions& options,
                             std::span<const double> start) {
    require_invertible(G);
    const std::size_t m = G.size();

    std::vector<double> x(m);
    if (start.size() == m) {
        std::copy(start.begin(), start.end(), x.begin());
    } else {
        std::mt19937_64 rng(options.seed);
        std::uniform_real_distribution<double> unit(0.5, 1.5);
        for (auto& v : x) v = unit(rng);
    }
    double nx = norm2(x);
    if (nx == 0.0) throw InvalidArgument("power iteration start vector is zero");
    for (auto& v : x) v /= nx;

    double lambda = 0.0;
    for (int it = 0; it < options.max_iterations; ++it) {
        auto y = solve_upper_transposed(G, solve_lower(G, x));
        // x has unit norm, so x.y is the Rayleigh quotient of G^{-T}G^{-1}.
        const double next = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
        const double ny = norm2(y);
        for (std::size_t i = 0; i < m; ++i) x[i] = y[i] / ny;
        if (it > 0 && std::abs(next - lambda) <= options.tolerance * std::abs(next)) return std::sqrt(next);
        lambda = next;
    }
    throw ConvergenceError("power iteration did not converge in " + std::to_string(options.max_iterations) +
                               " iterations",
                           std::sqrt(lambda), x);
}

InverseNormTable inverse_norms(const LagCoeffs& g, int max_m, const PowerIterationOptions& options) {
    if (max_m < 1) throw InvalidArgument("max_m must be at least 1");
    const auto G = build_G(g, max_m);
    require_invertible(G);
    const auto mm = static_cast<std::size_t>(max_m);

    InverseNormTable table;
    table.max_m = mm;
    table.spectral.assign(mm + 1, 0.0);
    table.frobenius.assign(mm + 1, 0.0);

    // The inverse of a lower-triangular Toeplitz matrix is lower-triangular
    // Toeplitz, so the last row of (G^(m))^{-1} is the reversed first m
    // entries of its first column and ||.||_F^2 adds up the row norms.
    std::vector<double> e1(mm, 0.0);
    e1[0] = 1.0;
    const auto inv_col = solve_lower(G, e1);
    double row_sq = 0.0, frob_sq = 0.0;

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    std::vector<double> warm;
    for (std::size_t m = 1; m <= mm; ++m) {
        row_sq += inv_col[m - 1] * inv_col[m - 1];
        frob_sq += row_sq;
        table.frobenius[m] = std::sqrt(frob_sq);

        warm.push_back(unit(rng));
        const auto Gm = G.leading(m);
        table.spectral[m] = inverse_spectral_norm(Gm, options, warm);
        // Reuse the dominant direction as the next start.
        auto y = solve_upper_transposed(Gm, solve_lower(Gm, warm));
        const double ny = norm2(y);
        for (std::size_t i = 0; i < m; ++i) warm[i] = y[i] / ny;
    }
    return table;
}

int select_M(const InverseNormTable& norms, double eps, int cap) {
    if (!(eps > 0.0)) throw InvalidArgument("noise level must be positive");
    if (norms.max_m == 0) throw InvalidArgument("empty inverse norm table");
    const std::size_t ceiling =
        std::min<std::size_t>(norms.max_m, static_cast<std::size_t>(std::max(cap, 1)));
    const double limit = 1.0 / (eps * eps);
    std::size_t best = 1;
    for (std::size_t m = 1; m <= ceiling; ++m) {
        if (norms.spectral[m] <= limit) best = m;
        else break;
    }
    return static_cast<int>(best);
}

}  // namespace wavelag
