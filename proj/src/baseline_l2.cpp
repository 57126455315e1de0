#include "igo/baseline_l2.hpp"

#include <cmath>
#include <limits>

namespace igo {
namespace {

void require_model_shape(const L2Model& model, const GrayImage& image) {
    if (image.height != model.height || image.width != model.width) {
        throw DimensionError("image is " + std::to_string(image.height) + "x" +
                             std::to_string(image.width) + " but the model expects " +
                             std::to_string(model.height) + "x" + std::to_string(model.width));
    }
}

}  // namespace

L2Model l2_fit(std::span<const GrayImage> images, std::size_t k, Execution mode) {
    const std::size_t n = images.size();
    if (n < 2) throw SampleSizeError("l2_fit needs at least two images");
    if (k == 0 || k >= n) {
        throw RankError("l2_fit needs 1 <= k < n (k = " + std::to_string(k) +
                            ", n = " + std::to_string(n) + ")",
                        n - 1);
    }
    const auto h = images.front().height;
    const auto w = images.front().width;
    for (const auto& img : images) {
        if (img.height != h || img.width != w) {
            throw DimensionError("images differ in size (" + std::to_string(h) + "x" +
                                 std::to_string(w) + " vs " + std::to_string(img.height) + "x" +
                                 std::to_string(img.width) + ")");
        }
    }

    L2Model model;
    model.height = h;
    model.width = w;
    const std::size_t p = h * w;
    model.mean.assign(p, 0.0);
    for (const auto& img : images)
        for (std::size_t r = 0; r < p; ++r) model.mean[r] += img.pixels[r];
    for (auto& m : model.mean) m /= static_cast<double>(n);

    // Deviations at the round-off level of the mean are zeroed so that
    // identical images yield exactly zero centered data.
    const double eps = static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    RealMatrix x(p, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < p; ++r) {
            const double d = images[i].pixels[r] - model.mean[r];
            x(r, i) = std::abs(d) <= eps * std::abs(model.mean[r]) ? 0.0 : d;
        }
    }

    model.subspace = snapshot_pca(x, k, mode);
    return model;
}

std::vector<double> l2_coefficients(const L2Model& model, const GrayImage& image) {
    require_model_shape(model, image);
    const auto& basis = model.subspace.basis;
    std::vector<double> coeff(basis.cols(), 0.0);
    for (std::size_t r = 0; r < basis.rows(); ++r) {
        const double centred = image.pixels[r] - model.mean[r];
        auto b = basis.row(r);
        for (std::size_t j = 0; j < coeff.size(); ++j) coeff[j] += b[j] * centred;
    }
    return coeff;
}

GrayImage l2_reconstruct(const L2Model& model, const GrayImage& image) {
    const auto coeff = l2_coefficients(model, image);
    const auto& basis = model.subspace.basis;
    std::vector<double> out(basis.rows());
    for (std::size_t r = 0; r < basis.rows(); ++r) {
        auto b = basis.row(r);
        double acc = 0.0;
        for (std::size_t j = 0; j < coeff.size(); ++j) acc += b[j] * coeff[j];
        out[r] = model.mean[r] + acc;
    }
    return GrayImage(model.height, model.width, std::move(out));
}

}  // namespace igo
