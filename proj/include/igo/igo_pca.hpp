#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "igo/linalg.hpp"
#include "igo/orientation.hpp"

namespace igo {

/// Reconstructed entries with |z~| at or below this value carry no reliable
/// angle and are marked invalid.
inline constexpr double kReconstructionModulusFloor = 1e-6;

/// Everything needed to embed and reconstruct new orientation images.
struct IgoModel {
    PrincipalSubspace<Complex> subspace;
    GradientFilterSpec filter;
    double magnitude_floor = kDefaultMagnitudeFloor;
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t training_count = 0;
    /// Empty unless the model was fit with centering enabled.
    std::vector<Complex> mean;

    std::size_t pixels() const noexcept { return height * width; }
    std::size_t components() const noexcept { return subspace.components(); }
    bool centered() const noexcept { return !mean.empty(); }
};

struct IgoFitOptions {
    /// Subtract the mean embedding before the decomposition. Off by default:
    /// the estimator works on the raw embeddings.
    bool center = false;
    Execution mode = Execution::serial;
    /// Recorded in the model so new intensity images are processed the same way.
    GradientFilterSpec filter = {};
    double magnitude_floor = kDefaultMagnitudeFloor;
};

/// Result of projecting one orientation image onto the subspace.
struct IgoReconstruction {
    OrientationImage orientation;  // angle of z~, valid where |z~| > floor
    std::vector<Complex> projection;  // z~ = B B^H z
};

/// Z = [e^{j phi_1} | ... | e^{j phi_n}], p x n. Throws DimensionError on
/// an empty list or mismatched sizes.
ComplexMatrix embedding_matrix(std::span<const OrientationImage> images);

/// Principal subspace of gradient orientations: embed, form Z^H Z,
/// eigendecompose and map the top-k eigenvectors back through Z.
IgoModel fit(std::span<const OrientationImage> images, std::size_t k,
             const IgoFitOptions& options = {});

/// Eigenvalues of Z^H Z (descending), for choosing k or inspecting flatness.
std::vector<double> orientation_spectrum(std::span<const OrientationImage> images,
                                         Execution mode = Execution::serial);

IgoReconstruction reconstruct(const IgoModel& model, const OrientationImage& phi);

/// reconstruct() applied to each image; results are identical to per-image calls.
std::vector<IgoReconstruction> batch_reconstruct(const IgoModel& model,
                                                 std::span<const OrientationImage> images,
                                                 Execution mode = Execution::serial);

/// Copy of the model keeping only the listed components, in the given order.
IgoModel select_components(const IgoModel& model, std::span<const std::size_t> components);

struct OutlierAxis {
    bool found = false;
    std::size_t component = 0;
    double alignment = 0.0;  // |b_l^H z_i| / sqrt(p), in [0, 1]
};

inline constexpr double kOutlierAlignmentThreshold = 0.9;

/// Component most aligned with the embedding of images[index]. `found` is
/// set when the alignment exceeds kOutlierAlignmentThreshold.
OutlierAxis find_outlier_axis(const IgoModel& model,
                              std::span<const OrientationImage> images, std::size_t index);

}  // namespace igo
