#include "wavelag/time_grid.hpp"

#include <cmath>

#include "wavelag/errors.hpp"

namespace wavelag {

TimeGrid::TimeGrid(std::size_t n, double horizon) : n_(n), horizon_(horizon) {
    if (n == 0) throw InvalidArgument("time grid needs at least one sample");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw InvalidArgument("time horizon must be positive and finite");
}

std::vector<double> TimeGrid::points() const {
    std::vector<double> t(n_);
    for (std::size_t k = 0; k < n_; ++k) t[k] = point(k);
    return t;
}

}  // namespace wavelag
