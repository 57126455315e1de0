#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "igo/linalg.hpp"

namespace igo {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultMagnitudeFloor = 1e-8;

/// One byte per pixel, non-zero = set.
using PixelMask = std::vector<std::uint8_t>;

/// Grayscale intensities, row-major. Height and width are at least 3.
struct GrayImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> pixels;

    GrayImage() = default;
    GrayImage(std::size_t h, std::size_t w, std::vector<double> values);

    std::size_t size() const noexcept { return pixels.size(); }
    double at(std::size_t row, std::size_t col) const noexcept { return pixels[row * width + col]; }
    double& at(std::size_t row, std::size_t col) noexcept { return pixels[row * width + col]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

enum class FilterKind { central_difference, gaussian_derivative };

std::string to_string(FilterKind kind);
/// Accepts "central-difference" and "gaussian-derivative"; throws ConfigError.
FilterKind parse_filter_kind(const std::string& text);

/// Gradient filter pair (h_x, h_y). Boundary handling is always replicate.
struct GradientFilterSpec {
    FilterKind kind = FilterKind::central_difference;
    double sigma = 1.0;  // gaussian-derivative only

    /// Half-width of the kernel support: 1 for central differences,
    /// ceil(3 sigma) for the Gaussian derivative.
    std::size_t half_width() const;

    friend bool operator==(const GradientFilterSpec&, const GradientFilterSpec&) = default;
};

/// Derivative taps in correlation order (tap i applies to offset i - half_width).
/// They sum to zero and respond with slope 1 to a unit ramp.
std::vector<double> derivative_kernel(const GradientFilterSpec& spec);

/// Smoothing taps applied across the derivative direction (sum to one).
std::vector<double> smoothing_kernel(const GradientFilterSpec& spec);

/// Per-pixel gradient orientations in [0, 2pi) with a validity mask.
struct OrientationImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> angles;
    PixelMask valid;

    OrientationImage() = default;
    /// All pixels valid.
    OrientationImage(std::size_t h, std::size_t w, std::vector<double> values);
    OrientationImage(std::size_t h, std::size_t w, std::vector<double> values, PixelMask mask);

    std::size_t size() const noexcept { return angles.size(); }

    friend bool operator==(const OrientationImage&, const OrientationImage&) = default;
};

/// z = e^{j phi}, one unit-modulus entry per pixel.
struct ComplexEmbedding {
    std::vector<Complex> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// x - 2pi floor(x / 2pi), with a result of exactly 2pi folded to 0.
double wrap_angle(double x) noexcept;

OrientationImage compute_orientation(const GrayImage& image,
                                     const GradientFilterSpec& filter = {},
                                     double magnitude_floor = kDefaultMagnitudeFloor);

/// Per-pixel (a - b) wrapped into [0, 2pi); the mask is the AND of both masks.
OrientationImage orientation_difference(const OrientationImage& a, const OrientationImage& b);

/// Sum of cos(a - b) over the pixels set in `region`.
double cosine_kernel(const OrientationImage& a, const OrientationImage& b,
                     std::span<const std::uint8_t> region);
/// Sum of cos(a - b) over the full raster.
double cosine_kernel(const OrientationImage& a, const OrientationImage& b);

/// Sine analogue of cosine_kernel over the full raster: sum of sin(a - b).
double sine_kernel(const OrientationImage& a, const OrientationImage& b);

/// d^2 = sum over the raster of 1 - cos(a - b); lies in [0, 2p].
double cosine_distance(const OrientationImage& a, const OrientationImage& b);

ComplexEmbedding embed(const OrientationImage& phi);

/// Angles of z in [0, 2pi). Entries with |z| <= modulus_floor get angle 0 and
/// are marked invalid. Throws DimensionError unless z.size() == height*width.
OrientationImage unembed(std::span<const Complex> z, std::size_t height, std::size_t width,
                         double modulus_floor = 0.0);

/// Euclidean distance between two embeddings.
double chord(const ComplexEmbedding& za, const ComplexEmbedding& zb);

/// z_a^H z_b.
Complex inner_product(const ComplexEmbedding& za, const ComplexEmbedding& zb);

}  // namespace igo
