#include "igo/orientation.hpp"

#include <cmath>

namespace igo {
namespace {

void require_same_shape(const OrientationImage& a, const OrientationImage& b, const char* op) {
    if (a.height != b.height || a.width != b.width) {
        throw DimensionError(std::string(op) + ": orientation images differ in size (" +
                             std::to_string(a.height) + "x" + std::to_string(a.width) + " vs " +
                             std::to_string(b.height) + "x" + std::to_string(b.width) + ")");
    }
}

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return 0;
    if (static_cast<std::size_t>(i) >= n) return n - 1;
    return static_cast<std::size_t>(i);
}

// Correlates every row (horizontal = true) or every column with `taps`,
// replicating edge pixels.
std::vector<double> correlate(const std::vector<double>& src, std::size_t height,
                              std::size_t width, const std::vector<double>& taps,
                              bool horizontal) {
    const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
    std::vector<double> out(src.size(), 0.0);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            double acc = 0.0;
            for (std::ptrdiff_t t = -half; t <= half; ++t) {
                const double tap = taps[static_cast<std::size_t>(t + half)];
                if (tap == 0.0) continue;
                const std::size_t rr =
                    horizontal ? r : clamp_index(static_cast<std::ptrdiff_t>(r) + t, height);
                const std::size_t cc =
                    horizontal ? clamp_index(static_cast<std::ptrdiff_t>(c) + t, width) : c;
                acc += tap * src[rr * width + cc];
            }
            out[r * width + c] = acc;
        }
    }
    return out;
}

}  // namespace

GrayImage::GrayImage(std::size_t h, std::size_t w, std::vector<double> values)
    : height(h), width(w), pixels(std::move(values)) {
    if (h < 3 || w < 3) {
        throw DimensionError("gray image must be at least 3x3, got " + std::to_string(h) + "x" +
                             std::to_string(w));
    }
    if (pixels.size() != h * w) {
        throw DimensionError("gray image has " + std::to_string(pixels.size()) +
                             " intensities for a " + std::to_string(h) + "x" +
                             std::to_string(w) + " raster");
    }
    for (double v : pixels) {
        if (!std::isfinite(v)) throw DomainError("gray image contains a non-finite intensity");
    }
}

std::string to_string(FilterKind kind) {
    return kind == FilterKind::central_difference ? "central-difference" : "gaussian-derivative";
}

FilterKind parse_filter_kind(const std::string& text) {
    if (text == "central-difference") return FilterKind::central_difference;
    if (text == "gaussian-derivative") return FilterKind::gaussian_derivative;
    throw ConfigError("unknown gradient filter '" + text +
                      "' (expected central-difference or gaussian-derivative)");
}

std::size_t GradientFilterSpec::half_width() const {
    if (kind == FilterKind::central_difference) return 1;
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("gaussian-derivative sigma must be positive and finite");
    }
    return static_cast<std::size_t>(std::ceil(3.0 * sigma));
}

std::vector<double> derivative_kernel(const GradientFilterSpec& spec) {
    if (spec.kind == FilterKind::central_difference) return {-0.5, 0.0, 0.5};

    const std::size_t half = spec.half_width();
    const auto n = 2 * half + 1;
    std::vector<double> taps(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) - static_cast<double>(half);
        // Negated analytic derivative of the Gaussian, so that correlation
        // with an increasing ramp is positive.
        taps[i] = t * std::exp(-t * t / (2.0 * spec.sigma * spec.sigma));
        mean += taps[i];
    }
    mean /= static_cast<double>(n);
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        taps[i] -= mean;
        slope += (static_cast<double>(i) - static_cast<double>(half)) * taps[i];
    }
    for (auto& tap : taps) tap /= slope;
    return taps;
}

std::vector<double> smoothing_kernel(const GradientFilterSpec& spec) {
    if (spec.kind == FilterKind::central_difference) return {1.0};

    const std::size_t half = spec.half_width();
    std::vector<double> taps(2 * half + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < taps.size(); ++i) {
        const double t = static_cast<double>(i) - static_cast<double>(half);
        taps[i] = std::exp(-t * t / (2.0 * spec.sigma * spec.sigma));
        sum += taps[i];
    }
    for (auto& tap : taps) tap /= sum;
    return taps;
}

OrientationImage::OrientationImage(std::size_t h, std::size_t w, std::vector<double> values)
    : OrientationImage(h, w, std::move(values), PixelMask(h * w, 1)) {}

OrientationImage::OrientationImage(std::size_t h, std::size_t w, std::vector<double> values,
                                   PixelMask mask)
    : height(h), width(w), angles(std::move(values)), valid(std::move(mask)) {
    if (angles.size() != h * w || valid.size() != h * w) {
        throw DimensionError("orientation image buffers do not match a " + std::to_string(h) +
                             "x" + std::to_string(w) + " raster");
    }
    for (double a : angles) {
        if (!(a >= 0.0 && a < kTwoPi)) {
            throw DomainError("orientation angle outside [0, 2pi)");
        }
    }
}

double wrap_angle(double x) noexcept {
    double y = x - kTwoPi * std::floor(x / kTwoPi);
    if (y >= kTwoPi || y < 0.0) y = 0.0;
    return y;
}

OrientationImage compute_orientation(const GrayImage& image, const GradientFilterSpec& filter,
                                     double magnitude_floor) {
    if (!(magnitude_floor >= 0.0)) throw DomainError("magnitude floor must be non-negative");
    const std::size_t support = 2 * filter.half_width() + 1;
    if (image.height < support || image.width < support) {
        throw DimensionError("image " + std::to_string(image.height) + "x" +
                             std::to_string(image.width) + " is smaller than the " +
                             std::to_string(support) + "-pixel filter support");
    }
    const auto d = derivative_kernel(filter);
    const auto s = smoothing_kernel(filter);
    const auto h = image.height;
    const auto w = image.width;

    auto gx = correlate(image.pixels, h, w, d, true);
    auto gy = correlate(image.pixels, h, w, d, false);
    if (s.size() > 1) {
        gx = correlate(gx, h, w, s, false);
        gy = correlate(gy, h, w, s, true);
    }

    OrientationImage out;
    out.height = h;
    out.width = w;
    out.angles.assign(h * w, 0.0);
    out.valid.assign(h * w, 0);
    for (std::size_t k = 0; k < h * w; ++k) {
        if (std::hypot(gx[k], gy[k]) > magnitude_floor) {
            out.angles[k] = wrap_angle(std::atan2(gy[k], gx[k]));
            out.valid[k] = 1;
        }
    }
    return out;
}

OrientationImage orientation_difference(const OrientationImage& a, const OrientationImage& b) {
    require_same_shape(a, b, "orientation_difference");
    OrientationImage out;
    out.height = a.height;
    out.width = a.width;
    out.angles.resize(a.size());
    out.valid.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out.angles[k] = wrap_angle(a.angles[k] - b.angles[k]);
        out.valid[k] = (a.valid[k] && b.valid[k]) ? 1 : 0;
    }
    return out;
}

double cosine_kernel(const OrientationImage& a, const OrientationImage& b,
                     std::span<const std::uint8_t> region) {
    require_same_shape(a, b, "cosine_kernel");
    if (region.size() != a.size()) {
        throw DimensionError("cosine_kernel: region mask has " + std::to_string(region.size()) +
                             " entries for " + std::to_string(a.size()) + " pixels");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (region[k]) s += std::cos(a.angles[k] - b.angles[k]);
    }
    return s;
}

double cosine_kernel(const OrientationImage& a, const OrientationImage& b) {
    require_same_shape(a, b, "cosine_kernel");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::cos(a.angles[k] - b.angles[k]);
    return s;
}

double sine_kernel(const OrientationImage& a, const OrientationImage& b) {
    require_same_shape(a, b, "sine_kernel");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::sin(a.angles[k] - b.angles[k]);
    return s;
}

double cosine_distance(const OrientationImage& a, const OrientationImage& b) {
    require_same_shape(a, b, "cosine_distance");
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d2 += 1.0 - std::cos(a.angles[k] - b.angles[k]);
    return d2;
}

ComplexEmbedding embed(const OrientationImage& phi) {
    ComplexEmbedding z;
    z.values.resize(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) z.values[k] = std::polar(1.0, phi.angles[k]);
    return z;
}

OrientationImage unembed(std::span<const Complex> z, std::size_t height, std::size_t width,
                         double modulus_floor) {
    if (z.size() != height * width) {
        throw DimensionError("unembed: " + std::to_string(z.size()) + " values for a " +
                             std::to_string(height) + "x" + std::to_string(width) + " raster");
    }
    OrientationImage out;
    out.height = height;
    out.width = width;
    out.angles.assign(z.size(), 0.0);
    out.valid.assign(z.size(), 0);
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (std::abs(z[k]) > modulus_floor) {
            out.angles[k] = wrap_angle(std::arg(z[k]));
            out.valid[k] = 1;
        }
    }
    return out;
}

Complex inner_product(const ComplexEmbedding& za, const ComplexEmbedding& zb) {
    if (za.size() != zb.size()) {
        throw DimensionError("embeddings differ in length (" + std::to_string(za.size()) +
                             " vs " + std::to_string(zb.size()) + ")");
    }
    Complex acc{};
    for (std::size_t k = 0; k < za.size(); ++k) acc += std::conj(za.values[k]) * zb.values[k];
    return acc;
}

double chord(const ComplexEmbedding& za, const ComplexEmbedding& zb) {
    if (za.size() != zb.size()) {
        throw DimensionError("chord: embeddings differ in length (" + std::to_string(za.size()) +
                             " vs " + std::to_string(zb.size()) + ")");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < za.size(); ++k) s += std::norm(za.values[k] - zb.values[k]);
    return std::sqrt(s);
}

}  // namespace igo
