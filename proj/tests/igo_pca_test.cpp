#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "igo/error.hpp"
#include "igo/igo_pca.hpp"
#include "igo/stats.hpp"
#include "support.hpp"

namespace igo {
namespace {

using std::numbers::pi;
using test::random_angles;

std::vector<OrientationImage> random_set(std::size_t n, std::size_t h, std::size_t w,
                                         std::uint64_t seed) {
    std::vector<OrientationImage> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_angles(h, w, seed + i));
    return out;
}

double circular_gap(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)); }

TEST(IgoFit, SingleImageIsRankOne) {
    const auto phi = random_angles(8, 8, 1);
    const auto model = fit(std::vector{phi}, 1);
    ASSERT_EQ(model.components(), 1u);
    EXPECT_NEAR(model.subspace.eigenvalues[0], 64.0, 1e-12);
    const auto z = embed(phi).values;
    const Complex phase = model.subspace.basis(0, 0) * std::sqrt(64.0) / z[0];
    EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
    for (std::size_t i = 0; i < 64; ++i)
        EXPECT_LE(std::abs(model.subspace.basis(i, 0) - phase * z[i] / 8.0), 1e-12);
    EXPECT_EQ(model.height, 8u);
    EXPECT_EQ(model.training_count, 1u);
    EXPECT_FALSE(model.centered());
}

TEST(IgoFit, FullRankReconstructsTrainingImages) {
    const auto images = random_set(6, 16, 16, 10);
    const auto model = fit(images, 6);
    for (const auto& phi : images) {
        const auto rec = reconstruct(model, phi);
        for (std::size_t k = 0; k < phi.size(); ++k)
            EXPECT_LE(circular_gap(rec.orientation.angles[k], phi.angles[k]), 1e-8);
        EXPECT_LE(cosine_distance(rec.orientation, phi) / double(phi.size()), 1e-8);
    }
}

TEST(IgoFit, UniformImagesHaveFlatSpectrum) {
    const auto images = random_set(10, 100, 100, 77);
    const auto model = fit(images, 10);
    for (double l : model.subspace.eigenvalues) {
        EXPECT_GT(l, 0.9 * 10000.0);
        EXPECT_LT(l, 1.1 * 10000.0);
    }
}

TEST(IgoFit, Errors) {
    std::vector<OrientationImage> mixed{random_angles(4, 4, 1), random_angles(4, 5, 2)};
    EXPECT_THROW(fit(mixed, 1), DimensionError);
    EXPECT_THROW(fit(std::vector<OrientationImage>{}, 1), DimensionError);
    const auto phi = random_angles(4, 4, 3);
    EXPECT_THROW(fit(std::vector{phi, phi}, 2), RankError);
    EXPECT_THROW(fit(std::vector{phi}, 0), RankError);
}

TEST(IgoFit, EnergyOrdering) {
    const auto images = random_set(7, 12, 12, 40);
    const auto z = embedding_matrix(images);
    const auto spectrum = orientation_spectrum(images);
    double previous = 0.0;
    for (std::size_t k = 1; k <= 7; ++k) {
        const auto model = fit(images, k);
        double energy = 0.0;
        for (std::size_t i = 0; i < 7; ++i) {
            const auto zi = z.column(i);
            for (std::size_t c = 0; c < k; ++c) {
                Complex coeff = 0.0;
                for (std::size_t r = 0; r < zi.size(); ++r)
                    coeff += std::conj(model.subspace.basis(r, c)) * zi[r];
                energy += std::norm(coeff);
            }
        }
        const double expected = std::accumulate(spectrum.begin(), spectrum.begin() + k, 0.0);
        EXPECT_NEAR(energy, expected, 1e-8 * expected);
        EXPECT_GE(energy, previous);
        previous = energy;
    }
}

TEST(IgoFit, PermutationInvariantSubspace) {
    auto images = random_set(6, 8, 8, 90);
    const auto p1 = test::projector(fit(images, 3).subspace.basis);
    std::reverse(images.begin(), images.end());
    std::swap(images[1], images[4]);
    const auto p2 = test::projector(fit(images, 3).subspace.basis);
    EXPECT_LE((p1 - p2).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(IgoFit, SerialAndParallelAgreeBitForBit) {
    const auto images = random_set(5, 40, 40, 3);
    IgoFitOptions serial, parallel;
    parallel.mode = Execution::parallel;
    const auto a = fit(images, 5, serial);
    const auto b = fit(images, 5, parallel);
    EXPECT_EQ(a.subspace.basis, b.subspace.basis);
    EXPECT_EQ(a.subspace.eigenvalues, b.subspace.eigenvalues);
}

TEST(IgoFit, CenteringStoresMeanAndReducesRank) {
    const auto images = random_set(4, 6, 6, 8);
    IgoFitOptions opt;
    opt.center = true;
    EXPECT_THROW(fit(images, 4, opt), RankError);
    const auto model = fit(images, 3, opt);
    ASSERT_TRUE(model.centered());
    const auto z = embedding_matrix(images);
    for (std::size_t r = 0; r < 36; ++r) {
        Complex m = 0.0;
        for (std::size_t c = 0; c < 4; ++c) m += z(r, c);
        EXPECT_LE(std::abs(model.mean[r] - m / 4.0), 1e-15);
    }
    for (const auto& phi : images) {
        const auto rec = reconstruct(model, phi);
        EXPECT_LE(cosine_distance(rec.orientation, phi) / 36.0, 1e-8);
    }
}

TEST(IgoReconstruct, OwnSpanIsExact) {
    const auto phi = random_angles(10, 10, 5);
    const auto model = fit(std::vector{phi}, 1);
    const auto rec = reconstruct(model, phi);
    for (std::size_t k = 0; k < phi.size(); ++k) {
        EXPECT_LE(circular_gap(rec.orientation.angles[k], phi.angles[k]), 1e-10);
        EXPECT_EQ(rec.orientation.valid[k], 1);
    }
}

TEST(IgoReconstruct, OrthogonalQueryProjectsToZero) {
    // Constant angle 0 versus a checkerboard of 0 and pi: the embeddings are orthogonal.
    const OrientationImage flat(4, 4, std::vector<double>(16, 0.0));
    std::vector<double> checker(16);
    for (std::size_t k = 0; k < 16; ++k) checker[k] = ((k / 4 + k % 4) % 2) ? pi : 0.0;
    const auto model = fit(std::vector{flat}, 1);
    const auto rec = reconstruct(model, OrientationImage(4, 4, checker));
    for (std::size_t k = 0; k < 16; ++k) {
        EXPECT_LE(std::abs(rec.projection[k]), 1e-15);
        EXPECT_EQ(rec.orientation.valid[k], 0);
    }
}

TEST(IgoReconstruct, MatchesBatchProjectionOracle) {
    const auto images = random_set(5, 9, 9, 60);
    const auto model = fit(images, 5);
    // Z~ = B B^H Z computed directly.
    const auto z = embedding_matrix(images);
    const auto& b = model.subspace.basis;
    const auto ztilde = multiply(b, multiply(adjoint(b), z));
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto rec = reconstruct(model, images[i]);
        for (std::size_t r = 0; r < z.rows(); ++r) {
            EXPECT_LE(std::abs(rec.projection[r] - ztilde(r, i)), 1e-12);
            EXPECT_LE(circular_gap(rec.orientation.angles[r], std::arg(ztilde(r, i))), 1e-8);
            EXPECT_LE(circular_gap(rec.orientation.angles[r], images[i].angles[r]), 1e-8);
        }
    }
}

TEST(IgoReconstruct, IdempotentWhenModulusIsWellConditioned) {
    // Small perturbations of one image keep |z~| close to one everywhere.
    const auto base = random_angles(20, 20, 1);
    std::vector<OrientationImage> images;
    Rng rng(4);
    for (int i = 0; i < 6; ++i) {
        std::vector<double> a(base.size());
        for (std::size_t k = 0; k < a.size(); ++k)
            a[k] = wrap_angle(base.angles[k] + 0.05 * rng.normal());
        images.emplace_back(20, 20, std::move(a));
    }
    const auto model = fit(images, 3);
    const auto query = images[0];
    const auto once = reconstruct(model, query);
    for (const auto& z : once.projection) ASSERT_GT(std::abs(z), 0.5);
    const auto twice = reconstruct(model, once.orientation);
    EXPECT_LE(cosine_distance(once.orientation, twice.orientation), 1e-6 * 400.0);
}

TEST(IgoReconstruct, DimensionMismatch) {
    const auto model = fit(std::vector{random_angles(4, 4, 1)}, 1);
    EXPECT_THROW(reconstruct(model, random_angles(4, 5, 1)), DimensionError);
}

TEST(BatchReconstruct, ConsistentWithSingleCalls) {
    const auto images = random_set(3, 11, 7, 200);
    const auto model = fit(images, 3);
    EXPECT_TRUE(batch_reconstruct(model, std::vector<OrientationImage>{}).empty());
    const auto single = batch_reconstruct(model, std::vector{images[1]});
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].orientation, reconstruct(model, images[1]).orientation);
    EXPECT_EQ(single[0].projection, reconstruct(model, images[1]).projection);
    const auto all = batch_reconstruct(model, images, Execution::parallel);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < images[i].size(); ++k)
            EXPECT_LE(circular_gap(all[i].orientation.angles[k], images[i].angles[k]), 1e-8);
    }
}

TEST(SelectComponents, KeepsRequestedColumns) {
    const auto images = random_set(4, 6, 6, 300);
    const auto model = fit(images, 4);
    const std::vector<std::size_t> keep{0, 2};
    const auto sub = select_components(model, keep);
    ASSERT_EQ(sub.components(), 2u);
    EXPECT_EQ(sub.subspace.eigenvalues[1], model.subspace.eigenvalues[2]);
    for (std::size_t r = 0; r < 36; ++r) EXPECT_EQ(sub.subspace.basis(r, 1), model.subspace.basis(r, 2));
    const std::vector<std::size_t> bad{4};
    EXPECT_THROW(select_components(model, bad), IndexError);
}

TEST(SharedRegion, SharedRegionDominatesKernel) {
    // Images equal on P1, independent uniform on P2.
    const std::size_t h = 40, w = 40, p = h * w;
    int violations = 0;
    for (std::uint64_t s = 0; s < 300; ++s) {
        auto a = random_angles(h, w, 5000 + 2 * s);
        auto b = random_angles(h, w, 5001 + 2 * s);
        std::size_t shared = 0;
        for (std::size_t k = 0; k < p; ++k) {
            if (k % w < w / 4) {
                b.angles[k] = a.angles[k];
                ++shared;
            }
        }
        const double re = inner_product(embed(a), embed(b)).real();
        if (std::abs(re - double(shared)) > 5.0 * std::sqrt(double(p - shared) / 2.0)) ++violations;
    }
    EXPECT_EQ(violations, 0);
}

TEST(DissimilarPairs, DissimilarPairsCancel) {
    const std::size_t p = 2500;
    int violations = 0;
    for (std::uint64_t s = 0; s < 300; ++s) {
        const auto ip = inner_product(embed(random_angles(50, 50, 9000 + 2 * s)),
                                      embed(random_angles(50, 50, 9001 + 2 * s)));
        const double bound = 5.0 * std::sqrt(p / 2.0);
        if (std::abs(ip.real()) > bound || std::abs(ip.imag()) > bound) ++violations;
    }
    EXPECT_EQ(violations, 0);
}

TEST(OutlierAxis, TwoImageAlignmentFollowsClosedForm) {
    // With equal diagonals p the eigenvectors of T are (z1 +- e z2) / norm, so
    // the best alignment of z2 is sqrt((p + |c|) / 2p), c = z1^H z2.
    const auto phi = random_angles(32, 32, 1);
    const auto rho = random_angles(32, 32, 2);
    const std::vector images{phi, rho};
    const auto axis = find_outlier_axis(fit(images, 2), images, 1);
    const double p = 1024.0;
    const double c = std::abs(inner_product(embed(phi), embed(rho)));
    EXPECT_NEAR(axis.alignment, std::sqrt((p + c) / (2.0 * p)), 1e-12);
    EXPECT_FALSE(axis.found);
}

TEST(OutlierAxis, OutlierBesideInlierClusterFindsOwnAxis) {
    const auto base = random_angles(32, 32, 1);
    std::vector<OrientationImage> images;
    Rng rng(7);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> a(base.size());
        for (std::size_t k = 0; k < a.size(); ++k)
            a[k] = wrap_angle(base.angles[k] + 0.05 * rng.normal());
        images.emplace_back(32, 32, std::move(a));
    }
    images.push_back(random_angles(32, 32, 2));
    const auto axis = find_outlier_axis(fit(images, 6), images, 5);
    EXPECT_TRUE(axis.found);
    EXPECT_GE(axis.alignment, 0.95);
}

TEST(OutlierAxis, SingleImageAlignsPerfectly) {
    const std::vector images{random_angles(16, 16, 3)};
    const auto axis = find_outlier_axis(fit(images, 1), images, 0);
    EXPECT_TRUE(axis.found);
    EXPECT_EQ(axis.component, 0u);
    EXPECT_NEAR(axis.alignment, 1.0, 1e-12);
}

TEST(OutlierAxis, UniformImagesSpanTheBasisUpToRotation) {
    // B^H Z / sqrt(p) is unitary up to CLT-scale cross terms.
    const std::size_t n = 8, p = 2500;
    const auto images = random_set(n, 50, 50, 400);
    const auto model = fit(images, n);
    const auto w = multiply(adjoint(model.subspace.basis), embedding_matrix(images));
    const auto wtw = gram(w);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double target = i == j ? double(p) : 0.0;
            EXPECT_LE(std::abs(wtw(i, j) - target), 5.0 * std::sqrt(2.0 * p));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double in_span = 0.0;
        for (std::size_t l = 0; l < n; ++l) in_span += std::norm(w(l, i));
        EXPECT_NEAR(in_span / double(p), 1.0, 1e-10);
    }
}

TEST(OutlierAxis, Errors) {
    const std::vector images{random_angles(4, 4, 3)};
    EXPECT_THROW(find_outlier_axis(fit(images, 1), images, 1), IndexError);
}

}  // namespace
}  // namespace igo
