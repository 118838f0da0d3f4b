#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavelag/quadrature.hpp"
#include "wavelag/time_grid.hpp"

namespace wavelag {

/// Laguerre polynomial L_l(t), three-term recurrence.
double laguerre_polynomial(int l, double t);

/// Laguerre function phi_l(t) = exp(-t/2) L_l(t). The family is orthonormal
/// in L^2(0, inf). Throws InvalidArgument for l < 0 or t < 0.
double eval_laguerre(int l, double t);

/// Expansion coefficients over phi_0..phi_{m-1}.
struct LagCoeffs {
    std::vector<double> values;

    LagCoeffs() = default;
    explicit LagCoeffs(std::vector<double> v);

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t l) const { return values[l]; }
    double& operator[](std::size_t l) { return values[l]; }
};

/// The first M Laguerre functions tabulated on a grid, stored row-major
/// (row l holds phi_l(t_1..t_n)).
class LaguerreBasis {
public:
    LaguerreBasis(int order, TimeGrid grid);

    std::size_t order() const noexcept { return order_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> row(std::size_t l) const {
        return {values_.data() + l * grid_.size(), grid_.size()};
    }
    double operator()(std::size_t l, std::size_t k) const { return values_[l * grid_.size() + k]; }

private:
    std::size_t order_;
    TimeGrid grid_;
    std::vector<double> values_;
};

LaguerreBasis tabulate_basis(int order, const TimeGrid& grid);

/// Quadrature approximation of int_0^T series(t) phi_l(t) dt for l < M.
LagCoeffs project(std::span<const double> series, const LaguerreBasis& basis,
                  Origin origin = Origin::Extrapolate);

/// sum_l coeffs[l] phi_l(t_k) on the basis grid. Accepts fewer coefficients
/// than the basis order.
std::vector<double> reconstruct(const LagCoeffs& coeffs, const LaguerreBasis& basis);

/// Orthogonal projection onto span{phi_0..phi_{M-1}}: reconstruct(project(series)).
std::vector<double> smooth_series(std::span<const double> series, const LaguerreBasis& basis,
                                  Origin origin = Origin::Extrapolate);

}  // namespace wavelag
