#pragma once

#include <vector>

#include "wavelag/time_grid.hpp"

namespace wavelag {

/// How the value of a sampled series at t = 0 is obtained. The grid has no
/// sample there, but the integral over [0, T] needs one.
enum class Origin {
    Extrapolate,  ///< polynomial extrapolation from the first samples
    Zero,         ///< the series is known to vanish at the origin
};

/// Weights w_k such that sum_k w_k s(t_k) approximates the integral of s over
/// [0, T]. Trapezoid rule with Gregory end corrections (through fifth
/// differences, exact for quintics); the order is reduced on grids too short
/// to hold both end stencils. With Origin::Extrapolate the origin value is the
/// degree-r extrapolant of s(t_1..t_{r+1}) folded into the first weights.
std::vector<double> quadrature_weights(const TimeGrid& grid, Origin origin);

/// Gregory correction order used for a grid of n samples.
int gregory_order(std::size_t n) noexcept;

}  // namespace wavelag
