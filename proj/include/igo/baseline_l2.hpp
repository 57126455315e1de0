#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "igo/linalg.hpp"
#include "igo/orientation.hpp"

namespace igo {

/// Mean-centred least-squares PCA of pixel intensities.
struct L2Model {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> mean;
    PrincipalSubspace<double> subspace;  // p x k orthonormal basis + eigenvalues

    std::size_t pixels() const noexcept { return height * width; }
    std::size_t components() const noexcept { return subspace.components(); }
};

/// Centres the images on their sample mean and runs the snapshot method on
/// the real data matrix. Needs n >= 2 and 1 <= k < n; throws RankError when k
/// is out of range or exceeds the numerical rank of the centred data.
L2Model l2_fit(std::span<const GrayImage> images, std::size_t k,
               Execution mode = Execution::serial);

/// mean + B B^T (x - mean).
GrayImage l2_reconstruct(const L2Model& model, const GrayImage& image);

/// Projection coefficients B^T (x - mean).
std::vector<double> l2_coefficients(const L2Model& model, const GrayImage& image);

}  // namespace igo
