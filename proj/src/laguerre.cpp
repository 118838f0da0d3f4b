#include "wavelag/laguerre.hpp"

#include <cmath>
#include <string>

#include "wavelag/errors.hpp"

namespace wavelag {

namespace {

constexpr double kRescale = 1e150;

// Runs the recurrence for L_0..L_last at t, calling sink(l, L_l * exp(-t/2))
// when weighted, sink(l, L_l) otherwise. Intermediate values are rescaled to
// stay finite for large t; the accumulated scale is folded back per term.
template <class Sink>
void laguerre_sweep(int last, double t, bool weighted, Sink&& sink) {
    double log_scale = weighted ? -0.5 * t : 0.0;
    double prev = 0.0;
    double cur = 1.0;
    for (int l = 0; l <= last; ++l) {
        if (std::abs(log_scale) < 700.0 || cur == 0.0)
            sink(l, cur * std::exp(log_scale));
        else
            sink(l, std::copysign(std::exp(std::log(std::abs(cur)) + log_scale), cur));
        const double next = ((2.0 * l + 1.0 - t) * cur - l * prev) / (l + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += std::log(kRescale);
        }
    }
}

void check_domain(int l, double t) {
    if (l < 0) throw InvalidArgument("Laguerre order must be nonnegative, got " + std::to_string(l));
    if (!(t >= 0.0)) throw InvalidArgument("Laguerre argument must be nonnegative");
}

}  // namespace

double laguerre_polynomial(int l, double t) {
    check_domain(l, t);
    double out = 0.0;
    laguerre_sweep(l, t, false, [&](int i, double v) {
        if (i == l) out = v;
    });
    return out;
}

double eval_laguerre(int l, double t) {
    check_domain(l, t);
    double out = 0.0;
    laguerre_sweep(l, t, true, [&](int i, double v) {
        if (i == l) out = v;
    });
    return out;
}

LagCoeffs::LagCoeffs(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) throw InvalidArgument("Laguerre coefficient vector must be nonempty");
}

LaguerreBasis::LaguerreBasis(int order, TimeGrid grid) : order_(0), grid_(grid) {
    if (order < 1) throw InvalidArgument("Laguerre basis order must be at least 1");
    order_ = static_cast<std::size_t>(order);
    const std::size_t n = grid_.size();
    values_.assign(order_ * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        laguerre_sweep(order - 1, grid_.point(k), true,
                       [&](int l, double v) { values_[static_cast<std::size_t>(l) * n + k] = v; });
    }
}

LaguerreBasis tabulate_basis(int order, const TimeGrid& grid) { return LaguerreBasis(order, grid); }

LagCoeffs project(std::span<const double> series, const LaguerreBasis& basis, Origin origin) {
    const std::size_t n = basis.grid().size();
    if (series.size() != n)
        throw InvalidArgument("series length " + std::to_string(series.size()) +
                              " does not match grid size " + std::to_string(n));
    const auto w = quadrature_weights(basis.grid(), origin);
    std::vector<double> weighted(n);
    for (std::size_t k = 0; k < n; ++k) weighted[k] = w[k] * series[k];

    std::vector<double> c(basis.order(), 0.0);
    for (std::size_t l = 0; l < basis.order(); ++l) {
        const auto row = basis.row(l);
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += weighted[k] * row[k];
        c[l] = acc;
    }
    return LagCoeffs(std::move(c));
}

std::vector<double> reconstruct(const LagCoeffs& coeffs, const LaguerreBasis& basis) {
    if (coeffs.size() > basis.order())
        throw InvalidArgument("more coefficients (" + std::to_string(coeffs.size()) +
                              ") than basis functions (" + std::to_string(basis.order()) + ")");
    const std::size_t n = basis.grid().size();
    std::vector<double> out(n, 0.0);
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        const double c = coeffs[l];
        if (c == 0.0) continue;
        const auto row = basis.row(l);
        for (std::size_t k = 0; k < n; ++k) out[k] += c * row[k];
    }
    return out;
}

std::vector<double> smooth_series(std::span<const double> series, const LaguerreBasis& basis,
                                  Origin origin) {
    return reconstruct(project(series, basis, origin), basis);
}

}  // namespace wavelag
