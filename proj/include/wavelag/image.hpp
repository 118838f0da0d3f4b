#pragma once

#include <cstddef>
#include <vector>

namespace wavelag {

/// Row-major real array; rows index x1, columns index x2.
struct Image {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Image() = default;
    Image(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    friend bool operator==(const Image&, const Image&) = default;
};

}  // namespace wavelag
