#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavelag/image.hpp"
#include "wavelag/time_grid.hpp"

namespace wavelag {

/// Real samples on (time, x1, x2), time-major then row-major:
/// data[(k * n1 + i) * n2 + j] is the value at t_{k+1}, row i, column j.
class Cube {
public:
    Cube(TimeGrid grid, std::size_t n1, std::size_t n2, double fill = 0.0);
    Cube(TimeGrid grid, std::size_t n1, std::size_t n2, std::vector<double> data);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t n() const noexcept { return grid_.size(); }
    std::size_t n1() const noexcept { return n1_; }
    std::size_t n2() const noexcept { return n2_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    double& operator()(std::size_t k, std::size_t i, std::size_t j) { return data_[(k * n1_ + i) * n2_ + j]; }
    double operator()(std::size_t k, std::size_t i, std::size_t j) const { return data_[(k * n1_ + i) * n2_ + j]; }

    Image slice(std::size_t k) const;
    void set_slice(std::size_t k, const Image& image);

    /// Time profile at pixel (i, j).
    std::vector<double> series(std::size_t i, std::size_t j) const;

    bool same_shape(const Cube& other) const noexcept {
        return grid_ == other.grid_ && n1_ == other.n1_ && n2_ == other.n2_;
    }

    friend bool operator==(const Cube&, const Cube&) = default;

private:
    TimeGrid grid_;
    std::size_t n1_;
    std::size_t n2_;
    std::vector<double> data_;
};

}  // namespace wavelag
