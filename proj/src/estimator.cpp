#include "wavelag/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wavelag/errors.hpp"

namespace wavelag {

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (n % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
    return m;
}

Cube extend_cube(const Cube& Y, std::size_t rows, std::size_t cols) {
    Cube out(Y.grid(), rows, cols);
    for (std::size_t k = 0; k < Y.n(); ++k) out.set_slice(k, reflect_extend(Y.slice(k), rows, cols));
    return out;
}

Cube crop_cube(const Cube& Y, std::size_t rows, std::size_t cols) {
    Cube out(Y.grid(), rows, cols);
    for (std::size_t k = 0; k < Y.n(); ++k) out.set_slice(k, restrict_quadrant(Y.slice(k), rows, cols));
    return out;
}

int checked_level(int J, int max_level, const char* name) {
    if (J < 0 || J > max_level)
        throw InvalidArgument(std::string(name) + " = " + std::to_string(J) + " outside [0, " +
                              std::to_string(max_level) + "]");
    return J;
}

}  // namespace

CoeffTensor::CoeffTensor(std::size_t M_, std::size_t n1_, std::size_t n2_, int levels1_, int levels2_)
    : M(M_), n1(n1_), n2(n2_), levels1(levels1_), levels2(levels2_), values(M_ * n1_ * n2_, 0.0) {}

CoeffTensor analyze(const Cube& Y, const WaveletSpec& spec, const LaguerreBasis& basis, Origin origin) {
    if (!(Y.grid() == basis.grid())) throw InvalidArgument("cube and Laguerre basis use different time grids");
    const std::size_t n = Y.n();
    const std::size_t n1 = Y.n1();
    const std::size_t n2 = Y.n2();
    const std::size_t M = basis.order();

    // Wavelet coefficients of every slice, kept time-major.
    std::vector<double> w(n * n1 * n2);
    int levels1 = 0;
    int levels2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto c = dwt2(Y.slice(k), spec);
        levels1 = c.levels1;
        levels2 = c.levels2;
        std::copy(c.values.data.begin(), c.values.data.end(), w.begin() + static_cast<std::ptrdiff_t>(k * n1 * n2));
    }

    const auto weights = quadrature_weights(Y.grid(), origin);
    CoeffTensor out(M, n1, n2, levels1, levels2);
    const std::size_t plane = n1 * n2;
    for (std::size_t l = 0; l < M; ++l) {
        const auto phi = basis.row(l);
        double* dst = out.values.data() + l * plane;
        for (std::size_t k = 0; k < n; ++k) {
            const double wk = weights[k] * phi[k];
            const double* src = w.data() + k * plane;
            for (std::size_t p = 0; p < plane; ++p) dst[p] += wk * src[p];
        }
    }
    return out;
}

Cube synthesize(const CoeffTensor& theta, const WaveletSpec& spec, const LaguerreBasis& basis) {
    if (theta.M > basis.order()) throw InvalidArgument("coefficient tensor has more Laguerre orders than the basis");
    const std::size_t n = basis.grid().size();
    const std::size_t plane = theta.n1 * theta.n2;
    Cube out(basis.grid(), theta.n1, theta.n2);
    WaveletCoeffs2D c;
    c.levels1 = theta.levels1;
    c.levels2 = theta.levels2;
    c.values = Image(theta.n1, theta.n2);
    WaveletSpec s = spec;
    s.levels1 = theta.levels1;
    s.levels2 = theta.levels2;
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(c.values.data.begin(), c.values.data.end(), 0.0);
        for (std::size_t l = 0; l < theta.M; ++l) {
            const double phi = basis(l, k);
            const double* src = theta.values.data() + l * plane;
            for (std::size_t p = 0; p < plane; ++p) c.values.data[p] += phi * src[p];
        }
        out.set_slice(k, idwt2(c, s));
    }
    return out;
}

double estimate_sigma_cube(const Cube& Y, const WaveletSpec& spec, NoiseEstimator method) {
    std::vector<double> per_slice(Y.n());
    for (std::size_t k = 0; k < Y.n(); ++k) per_slice[k] = estimate_sigma(Y.slice(k), spec, method);
    return median_of(std::move(per_slice));
}

double estimate_eps(const Cube& Y, const WaveletSpec& spec, NoiseEstimator method) {
    return Y.grid().horizon() * estimate_sigma_cube(Y, spec, method) / std::sqrt(static_cast<double>(Y.n()));
}

std::vector<double> thresholds(int M, double eps, double nu, const InverseNormTable& norms) {
    if (M < 1) throw InvalidArgument("Laguerre order must be at least 1");
    if (!(eps > 0.0)) throw InvalidArgument("thresholds need a positive noise level");
    if (!(nu > 0.0)) throw InvalidArgument("threshold constant nu must be positive");
    if (norms.max_m < static_cast<std::size_t>(M)) throw InvalidArgument("inverse norm table shorter than M");
    const double log_term = std::max(0.0, std::log(1.0 / eps));
    std::vector<double> lambda(static_cast<std::size_t>(M));
    for (std::size_t l = 0; l < lambda.size(); ++l) {
        const std::size_t l1 = std::max<std::size_t>(l, 1);
        lambda[l] = 2.0 * eps * std::sqrt(2.0 * nu * log_term / static_cast<double>(l1)) * norms.spectral[l1];
    }
    return lambda;
}

ThresholdResult hard_threshold(const CoeffTensor& tensor, std::span<const double> lambdas, bool keep_scaling) {
    if (lambdas.size() != tensor.M)
        throw InvalidArgument("expected " + std::to_string(tensor.M) + " thresholds, got " +
                              std::to_string(lambdas.size()));
    ThresholdResult r{tensor, std::vector<std::size_t>(tensor.M, 0)};
    for (std::size_t l = 0; l < tensor.M; ++l) {
        for (std::size_t p1 = 0; p1 < tensor.n1; ++p1) {
            const bool scaling_row = tensor.level1(p1) < 0;
            for (std::size_t p2 = 0; p2 < tensor.n2; ++p2) {
                double& v = r.tensor(l, p1, p2);
                const bool exempt = keep_scaling && scaling_row && tensor.level2(p2) < 0;
                if (!exempt && !(std::abs(v) > lambdas[l])) v = 0.0;
                if (v != 0.0) ++r.keep_counts[l];
            }
        }
    }
    return r;
}

void truncate_levels(CoeffTensor& tensor, int J1, int J2) {
    for (std::size_t p1 = 0; p1 < tensor.n1; ++p1) {
        const bool drop_row = tensor.level1(p1) >= J1;
        for (std::size_t p2 = 0; p2 < tensor.n2; ++p2) {
            if (!drop_row && tensor.level2(p2) < J2) continue;
            for (std::size_t l = 0; l < tensor.M; ++l) tensor(l, p1, p2) = 0.0;
        }
    }
}

int resolution_level(double eps, double A, int max_level) {
    if (!(A > 0.0)) throw InvalidArgument("radius A must be positive");
    if (eps < 0.0) throw InvalidArgument("noise level must be nonnegative");
    if (eps == 0.0) return max_level;
    const double J = std::floor(std::log2(A * A / (eps * eps)));
    return static_cast<int>(std::clamp(J, 0.0, static_cast<double>(max_level)));
}

DeconvolutionResult deconvolve(const Cube& Y, std::span<const double> g_series, const WaveletSpec& spec,
                               const EstimatorConfig& cfg) {
    if (g_series.size() != Y.n())
        throw InvalidArgument("kernel has " + std::to_string(g_series.size()) + " samples, cube has " +
                              std::to_string(Y.n()) + " time points");
    const int order = cfg.M ? *cfg.M : std::min<int>(cfg.M_cap, static_cast<int>(Y.n()));
    if (order < 1) throw InvalidArgument("Laguerre order must be at least 1");
    const auto basis = tabulate_basis(order, Y.grid());
    return deconvolve(Y, project(g_series, basis, Origin::Extrapolate), spec, cfg);
}

DeconvolutionResult deconvolve(const Cube& Y_in, const LagCoeffs& g, const WaveletSpec& spec,
                               const EstimatorConfig& cfg) {
    if (!(cfg.nu > 0.0)) throw InvalidArgument("threshold constant nu must be positive");
    if (cfg.eps && !(*cfg.eps >= 0.0 && std::isfinite(*cfg.eps)))
        throw InvalidArgument("noise level must be finite and nonnegative");
    if (g.size() == 0) throw InvalidArgument("kernel has no Laguerre coefficients");
    if (g[0] == 0.0) throw SingularOperator("kernel Laguerre coefficient g_0 vanishes; the operator is singular");
    validate_filter(spec.filter.lowpass);

    const std::size_t out_n1 = Y_in.n1();
    const std::size_t out_n2 = Y_in.n2();
    const Cube Y = cfg.symmetrize
                       ? extend_cube(Y_in, next_dyadic_above(out_n1), next_dyadic_above(out_n2))
                       : Y_in;
    const int max1 = dyadic_log2(Y.n1());
    const int max2 = dyadic_log2(Y.n2());

    Diagnostics d;
    d.work_n1 = Y.n1();
    d.work_n2 = Y.n2();
    d.sigma_hat = estimate_sigma_cube(Y, spec, cfg.sigma_method);
    d.eps_hat = Y.grid().horizon() * d.sigma_hat / std::sqrt(static_cast<double>(Y.n()));
    d.eps = cfg.eps.value_or(d.eps_hat);

    const bool use_threshold = cfg.threshold && d.eps > 0.0;
    if (cfg.threshold && d.eps == 0.0) d.warnings.emplace_back("noise level is zero; thresholding skipped");
    if (use_threshold && d.eps >= 1.0)
        d.warnings.emplace_back("noise level " + std::to_string(d.eps) + " >= 1; log(1/eps) floored at 0, all thresholds are zero");

    InverseNormTable norms;
    if (cfg.M) {
        if (*cfg.M < 1) throw InvalidArgument("Laguerre order must be at least 1");
        d.M = *cfg.M;
        if (use_threshold) norms = inverse_norms(g, d.M);
    } else {
        const int ceiling = std::min({cfg.M_cap, static_cast<int>(Y.n()), static_cast<int>(g.size())});
        if (ceiling < 1) throw InvalidArgument("automatic Laguerre order has an empty range");
        norms = inverse_norms(g, ceiling);
        d.M = d.eps > 0.0 ? select_M(norms, d.eps) : ceiling;
    }
    d.J1 = cfg.J1 ? checked_level(*cfg.J1, max1, "J1") : resolution_level(d.eps, cfg.A, max1);
    d.J2 = cfg.J2 ? checked_level(*cfg.J2, max2, "J2") : resolution_level(d.eps, cfg.A, max2);

    const auto basis = tabulate_basis(d.M, Y.grid());
    const auto G = build_G(g, d.M);
    // q(0) = 0 for every Laplace convolution.
    CoeffTensor theta = analyze(Y, spec, basis, Origin::Zero);

    const std::size_t plane = theta.n1 * theta.n2;
    const auto M = static_cast<std::size_t>(d.M);
    std::vector<double> q(M);
    for (std::size_t p = 0; p < plane; ++p) {
        for (std::size_t l = 0; l < M; ++l) q[l] = theta.values[l * plane + p];
        const auto x = solve_lower(G, q);
        for (std::size_t l = 0; l < M; ++l) theta.values[l * plane + p] = x[l];
    }
    truncate_levels(theta, d.J1, d.J2);

    if (use_threshold) {
        d.thresholds = thresholds(d.M, d.eps, cfg.nu, norms);
        auto r = hard_threshold(theta, d.thresholds);
        theta = std::move(r.tensor);
        d.keep_counts = std::move(r.keep_counts);
    } else {
        d.thresholds.assign(M, 0.0);
        d.keep_counts.assign(M, 0);
        for (std::size_t l = 0; l < M; ++l)
            for (std::size_t p = 0; p < plane; ++p)
                if (theta.values[l * plane + p] != 0.0) ++d.keep_counts[l];
    }

    Cube fhat = synthesize(theta, spec, basis);
    if (cfg.symmetrize) fhat = crop_cube(fhat, out_n1, out_n2);
    return {std::move(fhat), std::move(d)};
}

}  // namespace wavelag
