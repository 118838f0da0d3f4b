#pragma once

#include <cstddef>
#include <vector>

namespace wavelag {

/// Uniform sampling t_k = T*k/n, k = 1..n, of the horizon [0, T]. The origin
/// is not a sample point.
class TimeGrid {
public:
    TimeGrid(std::size_t n, double horizon);

    std::size_t size() const noexcept { return n_; }
    double horizon() const noexcept { return horizon_; }
    double step() const noexcept { return horizon_ / static_cast<double>(n_); }

    /// t_{k+1} for zero-based k.
    double point(std::size_t k) const noexcept {
        return horizon_ * static_cast<double>(k + 1) / static_cast<double>(n_);
    }
    std::vector<double> points() const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    std::size_t n_;
    double horizon_;
};

}  // namespace wavelag
