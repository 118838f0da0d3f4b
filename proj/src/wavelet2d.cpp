#include "wavelag/wavelet2d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "wavelag/errors.hpp"

namespace wavelag {

namespace {

std::vector<double> highpass_of(const std::vector<double>& h) {
    const std::size_t L = h.size();
    std::vector<double> g(L);
    for (std::size_t k = 0; k < L; ++k) g[k] = ((k % 2 == 0) ? 1.0 : -1.0) * h[L - 1 - k];
    return g;
}

int resolve_levels(int requested, std::size_t n) {
    const int full = dyadic_log2(n);
    if (requested < 0) return full;
    if (requested > full)
        throw InvalidArgument("decomposition depth " + std::to_string(requested) + " exceeds log2(" +
                              std::to_string(n) + ")");
    return requested;
}

// One analysis step on the first n entries of x; writes scaling then detail
// halves into out.
void analysis_step(std::span<const double> x, const std::vector<double>& h, const std::vector<double>& g,
                   std::span<double> out) {
    const std::size_t n = x.size();
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0;
        double d = 0.0;
        for (std::size_t m = 0; m < h.size(); ++m) {
            const double v = x[(2 * k + m) % n];
            a += h[m] * v;
            d += g[m] * v;
        }
        out[k] = a;
        out[half + k] = d;
    }
}

void synthesis_step(std::span<const double> a, std::span<const double> d, const std::vector<double>& h,
                    const std::vector<double>& g, std::span<double> out) {
    const std::size_t n = 2 * a.size();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (std::size_t m = 0; m < h.size(); ++m) out[(2 * k + m) % n] += h[m] * a[k] + g[m] * d[k];
    }
}

template <class Transform>
Image along_axes(const Image& in, int levels1, int levels2, Transform&& transform) {
    Image out = in;
    if (levels2 > 0) {
        std::vector<double> row(in.cols);
        for (std::size_t i = 0; i < in.rows; ++i) {
            std::copy_n(out.data.begin() + static_cast<std::ptrdiff_t>(i * in.cols), in.cols, row.begin());
            auto t = transform(row, levels2);
            std::copy(t.begin(), t.end(), out.data.begin() + static_cast<std::ptrdiff_t>(i * in.cols));
        }
    }
    if (levels1 > 0) {
        std::vector<double> col(in.rows);
        for (std::size_t j = 0; j < in.cols; ++j) {
            for (std::size_t i = 0; i < in.rows; ++i) col[i] = out(i, j);
            auto t = transform(col, levels1);
            for (std::size_t i = 0; i < in.rows; ++i) out(i, j) = t[i];
        }
    }
    return out;
}

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (n % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
    return m;
}

}  // namespace

WaveletFilter daubechies(int vanishing_moments) {
    switch (vanishing_moments) {
        case 1: {
            const double s = 1.0 / std::sqrt(2.0);
            return {"db1", {s, s}};
        }
        case 2: {
            const double r3 = std::sqrt(3.0);
            const double d = 4.0 * std::sqrt(2.0);
            return {"db2", {(1.0 + r3) / d, (3.0 + r3) / d, (3.0 - r3) / d, (1.0 - r3) / d}};
        }
        case 3:
            return {"db3",
                    {0.33267055295008261599851158914, 0.80689150931109257649449360409,
                     0.45987750211849157009515194215, -0.13501102001025458869638990670,
                     -0.08544127388202666169281916918, 0.03522629188570953660274066472}};
        case 4:
            return {"db4",
                    {0.23037781330889650086329118304, 0.71484657055291564708992195527,
                     0.63088076792985890788171633830, -0.02798376941685985421141374718,
                     -0.18703481171909308407957067279, 0.03084138183556076362721936253,
                     0.03288301166688519973540751355, -0.01059740178506903210488320852}};
        default:
            throw InvalidArgument("supported Daubechies filters have 1 to 4 vanishing moments");
    }
}

WaveletFilter wavelet_by_name(std::string_view name) {
    if (name == "haar" || name == "db1") return daubechies(1);
    if (name == "db2") return daubechies(2);
    if (name == "db3") return daubechies(3);
    if (name == "db4") return daubechies(4);
    throw InvalidArgument("unknown wavelet '" + std::string(name) + "' (expected haar, db1..db4)");
}

void validate_filter(const std::vector<double>& h) {
    constexpr double tol = 1e-12;
    if (h.size() < 2 || h.size() % 2 != 0) throw InvalidArgument("wavelet filter needs an even number of taps");
    const double energy = std::inner_product(h.begin(), h.end(), h.begin(), 0.0);
    const double sum = std::accumulate(h.begin(), h.end(), 0.0);
    if (std::abs(energy - 1.0) > tol) throw InvalidArgument("wavelet filter taps do not have unit energy");
    if (std::abs(sum - std::sqrt(2.0)) > tol) throw InvalidArgument("wavelet filter taps do not sum to sqrt(2)");
    for (std::size_t shift = 2; shift < h.size(); shift += 2) {
        double acc = 0.0;
        for (std::size_t k = 0; k + shift < h.size(); ++k) acc += h[k] * h[k + shift];
        if (std::abs(acc) > tol) throw InvalidArgument("wavelet filter taps are not orthogonal to their even shifts");
    }
}

int dyadic_log2(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw InvalidArgument("size " + std::to_string(n) + " is not a power of two");
    int p = 0;
    while ((std::size_t{1} << p) < n) ++p;
    return p;
}

int coefficient_level(std::size_t p, std::size_t n, int levels) {
    const int full = dyadic_log2(n);
    const std::size_t coarse = n >> levels;
    if (p < coarse) return -1;
    std::size_t offset = p - coarse;
    for (int j = full - 1; j >= full - levels; --j) {
        const std::size_t block = std::size_t{1} << j;
        if (offset < block) return j;
        offset -= block;
    }
    throw InvalidArgument("coefficient position out of range");
}

std::size_t coefficient_shift(std::size_t p, std::size_t n, int levels) {
    const int full = dyadic_log2(n);
    const std::size_t coarse = n >> levels;
    if (p < coarse) return p;
    std::size_t offset = p - coarse;
    for (int j = full - 1; j >= full - levels; --j) {
        const std::size_t block = std::size_t{1} << j;
        if (offset < block) return offset;
        offset -= block;
    }
    throw InvalidArgument("coefficient position out of range");
}

int WaveletCoeffs2D::level1(std::size_t p) const { return coefficient_level(p, values.rows, levels1); }
int WaveletCoeffs2D::level2(std::size_t p) const { return coefficient_level(p, values.cols, levels2); }
std::size_t WaveletCoeffs2D::shift1(std::size_t p) const { return coefficient_shift(p, values.rows, levels1); }
std::size_t WaveletCoeffs2D::shift2(std::size_t p) const { return coefficient_shift(p, values.cols, levels2); }

std::vector<double> dwt1(std::vector<double> signal, const WaveletFilter& filter, int levels) {
    const std::size_t n = signal.size();
    levels = resolve_levels(levels, n);
    const auto& h = filter.lowpass;
    const auto g = highpass_of(h);

    // Work in place on the leading scaling segment, then reorder the detail
    // blocks so the finest comes first.
    std::vector<double> work(n);
    std::vector<std::vector<double>> details;
    std::size_t len = n;
    for (int lvl = 0; lvl < levels; ++lvl) {
        analysis_step(std::span<const double>(signal.data(), len), h, g, std::span<double>(work.data(), len));
        details.emplace_back(work.begin() + static_cast<std::ptrdiff_t>(len / 2),
                             work.begin() + static_cast<std::ptrdiff_t>(len));
        std::copy_n(work.begin(), len / 2, signal.begin());
        len /= 2;
    }
    std::vector<double> out(signal.begin(), signal.begin() + static_cast<std::ptrdiff_t>(len));
    out.reserve(n);
    for (const auto& d : details) out.insert(out.end(), d.begin(), d.end());
    return out;
}

std::vector<double> idwt1(std::vector<double> coeffs, const WaveletFilter& filter, int levels) {
    const std::size_t n = coeffs.size();
    levels = resolve_levels(levels, n);
    const auto& h = filter.lowpass;
    const auto g = highpass_of(h);

    std::size_t len = n >> levels;
    std::vector<double> approx(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(len));
    // Detail block for the current len lives at offset n - 2 len... walk from
    // the end of the layout (coarsest) towards the front (finest).
    std::size_t end = n;
    std::vector<double> next;
    for (int lvl = 0; lvl < levels; ++lvl) {
        const std::size_t begin = end - len;
        std::span<const double> detail(coeffs.data() + begin, len);
        next.assign(2 * len, 0.0);
        synthesis_step(approx, detail, h, g, next);
        approx.swap(next);
        end = begin;
        len *= 2;
    }
    return approx;
}

WaveletCoeffs2D dwt2(const Image& image, const WaveletSpec& spec) {
    const int l1 = resolve_levels(spec.levels1, image.rows);
    const int l2 = resolve_levels(spec.levels2, image.cols);
    WaveletCoeffs2D out;
    out.levels1 = l1;
    out.levels2 = l2;
    out.values = along_axes(image, l1, l2, [&](std::vector<double>& v, int levels) {
        return dwt1(v, spec.filter, levels);
    });
    return out;
}

Image idwt2(const WaveletCoeffs2D& coeffs, const WaveletSpec& spec) {
    dyadic_log2(coeffs.values.rows);
    dyadic_log2(coeffs.values.cols);
    return along_axes(coeffs.values, coeffs.levels1, coeffs.levels2, [&](std::vector<double>& v, int levels) {
        return idwt1(v, spec.filter, levels);
    });
}

double estimate_sigma(const Image& image, const WaveletSpec& spec, NoiseEstimator method) {
    if (image.rows < 2 || image.cols < 2) throw InvalidArgument("noise estimation needs at least a 2x2 image");
    WaveletSpec one_level = spec;
    one_level.levels1 = 1;
    one_level.levels2 = 1;
    const auto c = dwt2(image, one_level);

    // Finest detail x detail block: second half along both axes.
    std::vector<double> d;
    d.reserve(image.rows * image.cols / 4);
    for (std::size_t i = image.rows / 2; i < image.rows; ++i)
        for (std::size_t j = image.cols / 2; j < image.cols; ++j) d.push_back(c.values(i, j));

    if (method == NoiseEstimator::Mad) {
        const double med = median_of(d);
        for (auto& v : d) v = std::abs(v - med);
        return median_of(std::move(d)) / 0.6745;
    }
    if (d.size() < 2) return 0.0;
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(d.size() - 1));
}

Image symmetrize(const Image& image) { return reflect_extend(image, 2 * image.rows, 2 * image.cols); }

Image restrict_quadrant(const Image& image, std::size_t rows, std::size_t cols) {
    if (rows > image.rows || cols > image.cols) throw InvalidArgument("quadrant larger than image");
    Image out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = image(i, j);
    return out;
}

Image reflect_extend(const Image& image, std::size_t rows, std::size_t cols) {
    if (image.rows == 0 || image.cols == 0) throw InvalidArgument("cannot extend an empty image");
    if (rows < image.rows || cols < image.cols || rows > 2 * image.rows || cols > 2 * image.cols)
        throw InvalidArgument("reflection extension must stay within one mirrored copy per axis");
    auto mirror = [](std::size_t i, std::size_t n) { return i < n ? i : 2 * n - 1 - i; };
    Image out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = image(mirror(i, image.rows), mirror(j, image.cols));
    return out;
}

std::size_t next_dyadic_above(std::size_t n) {
    std::size_t p = 1;
    while (p <= n) p <<= 1;
    return p;
}

}  // namespace wavelag
