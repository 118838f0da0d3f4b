#include "wavelag/cube.hpp"

#include <algorithm>
#include <string>

#include "wavelag/errors.hpp"

namespace wavelag {

Cube::Cube(TimeGrid grid, std::size_t n1, std::size_t n2, double fill)
    : grid_(grid), n1_(n1), n2_(n2), data_(grid.size() * n1 * n2, fill) {
    if (n1 == 0 || n2 == 0) throw InvalidArgument("cube spatial sides must be positive");
}

Cube::Cube(TimeGrid grid, std::size_t n1, std::size_t n2, std::vector<double> data)
    : grid_(grid), n1_(n1), n2_(n2), data_(std::move(data)) {
    if (n1 == 0 || n2 == 0) throw InvalidArgument("cube spatial sides must be positive");
    if (data_.size() != grid.size() * n1 * n2)
        throw InvalidArgument("cube data has " + std::to_string(data_.size()) + " values, expected " +
                              std::to_string(grid.size() * n1 * n2));
}

Image Cube::slice(std::size_t k) const {
    Image img(n1_, n2_);
    const auto first = data_.begin() + static_cast<std::ptrdiff_t>(k * n1_ * n2_);
    std::copy(first, first + static_cast<std::ptrdiff_t>(n1_ * n2_), img.data.begin());
    return img;
}

void Cube::set_slice(std::size_t k, const Image& image) {
    if (image.rows != n1_ || image.cols != n2_) throw InvalidArgument("slice shape does not match cube");
    std::copy(image.data.begin(), image.data.end(), data_.begin() + static_cast<std::ptrdiff_t>(k * n1_ * n2_));
}

std::vector<double> Cube::series(std::size_t i, std::size_t j) const {
    std::vector<double> s(n());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = (*this)(k, i, j);
    return s;
}

}  // namespace wavelag
