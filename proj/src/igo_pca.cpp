#include "igo/igo_pca.hpp"

#include <algorithm>
#include <cmath>

namespace igo {
namespace {

void require_model_shape(const IgoModel& model, const OrientationImage& phi) {
    if (phi.height != model.height || phi.width != model.width) {
        throw DimensionError("orientation image is " + std::to_string(phi.height) + "x" +
                             std::to_string(phi.width) + " but the model expects " +
                             std::to_string(model.height) + "x" + std::to_string(model.width));
    }
}

}  // namespace

ComplexMatrix embedding_matrix(std::span<const OrientationImage> images) {
    if (images.empty()) throw DimensionError("need at least one orientation image");
    const auto h = images.front().height;
    const auto w = images.front().width;
    for (const auto& img : images) {
        if (img.height != h || img.width != w) {
            throw DimensionError("orientation images differ in size (" + std::to_string(h) + "x" +
                                 std::to_string(w) + " vs " + std::to_string(img.height) + "x" +
                                 std::to_string(img.width) + ")");
        }
    }
    const std::size_t n = images.size();
    ComplexMatrix z(h * w, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& angles = images[i].angles;
        for (std::size_t k = 0; k < angles.size(); ++k) z(k, i) = std::polar(1.0, angles[k]);
    }
    return z;
}

IgoModel fit(std::span<const OrientationImage> images, std::size_t k,
             const IgoFitOptions& options) {
    ComplexMatrix z = embedding_matrix(images);

    IgoModel model;
    model.filter = options.filter;
    model.magnitude_floor = options.magnitude_floor;
    model.height = images.front().height;
    model.width = images.front().width;
    model.training_count = images.size();

    if (options.center) {
        model.mean.assign(z.rows(), Complex{});
        const double inv_n = 1.0 / static_cast<double>(z.cols());
        for (std::size_t r = 0; r < z.rows(); ++r) {
            auto row = z.row(r);
            Complex acc{};
            for (const auto& v : row) acc += v;
            model.mean[r] = acc * inv_n;
            for (auto& v : row) v -= model.mean[r];
        }
    }
    model.subspace = snapshot_pca(z, k, options.mode);
    return model;
}

std::vector<double> orientation_spectrum(std::span<const OrientationImage> images,
                                         Execution mode) {
    return gram_spectrum(embedding_matrix(images), mode);
}

IgoReconstruction reconstruct(const IgoModel& model, const OrientationImage& phi) {
    require_model_shape(model, phi);
    const auto& basis = model.subspace.basis;
    const std::size_t p = basis.rows();
    const std::size_t k = basis.cols();

    std::vector<Complex> z(p);
    for (std::size_t r = 0; r < p; ++r) {
        z[r] = std::polar(1.0, phi.angles[r]);
        if (model.centered()) z[r] -= model.mean[r];
    }

    std::vector<Complex> coeff(k);
    for (std::size_t r = 0; r < p; ++r) {
        auto b = basis.row(r);
        for (std::size_t j = 0; j < k; ++j) coeff[j] += std::conj(b[j]) * z[r];
    }

    IgoReconstruction out;
    out.projection.assign(p, Complex{});
    for (std::size_t r = 0; r < p; ++r) {
        auto b = basis.row(r);
        Complex acc{};
        for (std::size_t j = 0; j < k; ++j) acc += b[j] * coeff[j];
        if (model.centered()) acc += model.mean[r];
        out.projection[r] = acc;
    }
    out.orientation =
        unembed(out.projection, model.height, model.width, kReconstructionModulusFloor);
    return out;
}

std::vector<IgoReconstruction> batch_reconstruct(const IgoModel& model,
                                                 std::span<const OrientationImage> images,
                                                 Execution mode) {
    std::vector<IgoReconstruction> out(images.size());
    parallel_for(images.size(), mode,
                 [&](std::size_t i) { out[i] = reconstruct(model, images[i]); });
    return out;
}

IgoModel select_components(const IgoModel& model, std::span<const std::size_t> components) {
    const auto& src = model.subspace;
    IgoModel out = model;
    out.subspace.basis = ComplexMatrix(src.basis.rows(), components.size());
    out.subspace.eigenvalues.clear();
    for (std::size_t j = 0; j < components.size(); ++j) {
        const auto c = components[j];
        if (c >= src.components()) {
            throw IndexError("component " + std::to_string(c) + " out of range (model has " +
                             std::to_string(src.components()) + ")");
        }
        out.subspace.eigenvalues.push_back(src.eigenvalues[c]);
        for (std::size_t r = 0; r < src.basis.rows(); ++r) out.subspace.basis(r, j) = src.basis(r, c);
    }
    return out;
}

OutlierAxis find_outlier_axis(const IgoModel& model,
                              std::span<const OrientationImage> images, std::size_t index) {
    if (index >= images.size()) {
        throw IndexError("image index " + std::to_string(index) + " out of range (" +
                         std::to_string(images.size()) + " images)");
    }
    const auto& phi = images[index];
    require_model_shape(model, phi);
    const auto& basis = model.subspace.basis;
    const std::size_t k = basis.cols();

    std::vector<Complex> dots(k);
    for (std::size_t r = 0; r < basis.rows(); ++r) {
        const Complex z = std::polar(1.0, phi.angles[r]);
        auto b = basis.row(r);
        for (std::size_t j = 0; j < k; ++j) dots[j] += std::conj(b[j]) * z;
    }

    OutlierAxis axis;
    const double norm = std::sqrt(static_cast<double>(model.pixels()));
    for (std::size_t j = 0; j < k; ++j) {
        const double a = std::abs(dots[j]) / norm;
        if (j == 0 || a > axis.alignment) {
            axis.alignment = a;
            axis.component = j;
        }
    }
    axis.alignment = std::min(axis.alignment, 1.0);
    axis.found = axis.alignment > kOutlierAlignmentThreshold;
    return axis;
}

}  // namespace igo
