#include "wavelag/quadrature.hpp"

#include <algorithm>
#include <array>

#include "wavelag/errors.hpp"

namespace wavelag {

namespace {

// Left-end weights (in units of the step) at nodes 0..r of the Gregory rule
// with corrections through the r-th forward difference. Row r = 0 is the
// plain trapezoid. The right end mirrors these.
constexpr std::array<std::array<double, 6>, 6> kGregory = {{
    {1.0 / 2.0},
    {5.0 / 12.0, 13.0 / 12.0},
    {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0},
    {251.0 / 720.0, 299.0 / 240.0, 211.0 / 240.0, 739.0 / 720.0},
    {95.0 / 288.0, 317.0 / 240.0, 23.0 / 30.0, 793.0 / 720.0, 157.0 / 160.0},
    {19087.0 / 60480.0, 84199.0 / 60480.0, 18869.0 / 30240.0, 37621.0 / 30240.0,
     55031.0 / 60480.0, 61343.0 / 60480.0},
}};

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

int gregory_order(std::size_t n) noexcept {
    // Stencils at nodes 0..r and n-r..n must not overlap.
    const auto fit = static_cast<int>((n - 1) / 2);
    return std::min(5, fit);
}

std::vector<double> quadrature_weights(const TimeGrid& grid, Origin origin) {
    const std::size_t n = grid.size();
    const double h = grid.step();
    const int r = gregory_order(n);

    // Weights on nodes 0..n, node 0 being the origin.
    std::vector<double> full(n + 1, 1.0);
    for (int i = 0; i <= r; ++i) {
        full[static_cast<std::size_t>(i)] = kGregory[r][i];
        full[n - static_cast<std::size_t>(i)] = kGregory[r][i];
    }

    std::vector<double> w(full.begin() + 1, full.end());
    if (origin == Origin::Extrapolate) {
        const int p = r + 1;
        for (int j = 1; j <= p; ++j) {
            const double sign = (j % 2 == 1) ? 1.0 : -1.0;
            w[static_cast<std::size_t>(j - 1)] += full[0] * sign * binomial(p, j);
        }
    }
    for (auto& v : w) v *= h;
    return w;
}

}  // namespace wavelag
