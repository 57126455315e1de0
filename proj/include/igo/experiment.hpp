#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "igo/baseline_l2.hpp"
#include "igo/igo_pca.hpp"
#include "igo/orientation.hpp"

namespace igo::experiment {

namespace fs = std::filesystem;

enum class CorruptionKind { none, occlusion, replacement };

std::string to_string(CorruptionKind kind);
CorruptionKind parse_corruption_kind(const std::string& text);

/// What was done to one image. For occlusions the rectangle is the patch
/// footprint; for replacements it covers the whole raster.
struct CorruptionRecord {
    CorruptionKind kind = CorruptionKind::none;
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t w = 0;
    std::size_t h = 0;
    std::string source;

    /// Per-pixel mask of the corrupted region (all zero for `none`).
    PixelMask region(std::size_t height, std::size_t width) const;

    friend bool operator==(const CorruptionRecord&, const CorruptionRecord&) = default;
};

struct SynthConfig {
    std::size_t count = 50;
    std::size_t height = 128;
    std::size_t width = 128;
    std::size_t rank = 3;
    CorruptionKind mode = CorruptionKind::occlusion;
    double fraction = 0.2;
    std::size_t patch = 45;
    std::uint64_t seed = 1;
    /// Image = 0.5 + amplitude * sum_r w_r basis_r + noise * N(0, 1).
    double amplitude = 0.15;
    double noise = 0.00075;

    /// Throws ConfigError for out-of-range values.
    void validate() const;
};

/// Synthetic low-rank dataset: `clean` holds the uncorrupted images (ground
/// truth), `observed` the ones handed to the estimators.
struct SyntheticDataset {
    SynthConfig config;
    std::vector<GrayImage> clean;
    std::vector<GrayImage> observed;
    std::vector<CorruptionRecord> corruption;

    /// Indices of corrupted images (the outlier set).
    std::vector<std::size_t> corrupted_indices() const;
};

/// Low-frequency cosine basis image number `index` (0-based) on a h x w raster.
GrayImage cosine_basis_image(std::size_t height, std::size_t width, std::size_t index);

/// Fixed high-texture pattern: bilinear value noise with 4-pixel cells, values
/// in [0, 1], deterministic in `seed`.
GrayImage value_noise_texture(std::size_t height, std::size_t width, std::uint64_t seed);

inline constexpr std::uint64_t kTextureSeed = 0x5eed'7e47'0001ULL;

/// Builds the dataset in memory. Intensities are quantized to 16 bits so the
/// result equals what write_dataset() followed by load_image() produces.
SyntheticDataset synthesize(const SynthConfig& config);

// Manifest
// --------
// Plain text, '#' starts a comment line, blank lines ignored. A [dataset]
// block carries "key = value" generation parameters; each [image] block
// describes one image:
//
//   [image]
//   path = images/img_000.pgm       (required, relative to the manifest)
//   clean = clean/img_000.pgm       (optional ground truth)
//   corruption = none | occlusion | replacement
//   x = .. y = .. w = .. h = ..     (occlusion / replacement rectangle)
//   source = value-noise
//   split = train

struct ManifestEntry {
    fs::path path;
    std::optional<fs::path> clean;
    CorruptionRecord corruption;
    std::string split = "train";
};

struct DatasetManifest {
    std::map<std::string, std::string> parameters;
    std::vector<ManifestEntry> entries;

    std::vector<std::size_t> corrupted_indices() const;
};

/// Writes images/, clean/ and manifest.txt under `directory`; returns the
/// manifest path.
fs::path write_dataset(const SyntheticDataset& dataset, const fs::path& directory);

std::string format_manifest(const DatasetManifest& manifest);

/// Parses and validates a manifest. Paths are resolved against the
/// manifest's directory; missing files and out-of-bounds rectangles raise
/// ConfigError.
DatasetManifest read_manifest(const fs::path& path);

struct LoadedDataset {
    std::vector<GrayImage> observed;
    std::vector<GrayImage> clean;  // empty when the manifest has no ground truth
    std::vector<CorruptionRecord> corruption;
};

LoadedDataset load_dataset(const DatasetManifest& manifest);

// Comparison
// ----------

/// Mean of 1 - cos(a - b) over pixels set in `region` and valid in `truth`;
/// NaN when no pixel qualifies.
double orientation_error(const OrientationImage& estimate, const OrientationImage& truth,
                         std::span<const std::uint8_t> region);

struct ImageComparison {
    std::size_t index = 0;
    CorruptionKind corruption = CorruptionKind::none;
    double igo_clean = 0.0;
    double igo_corrupted = 0.0;
    double l2_clean = 0.0;
    double l2_corrupted = 0.0;
    double l2_clean_rmse = 0.0;  // intensity domain
};

struct OutlierSeparation {
    std::size_t outlier_index = 0;
    std::size_t rank = 0;  // components of the full-rank model
    OutlierAxis axis;
    double l2_alignment = 0.0;  // best |b^T x_c| / ||x_c|| over the l2 components
    std::size_t evaluated_components = 0;
    double inlier_error_with = 0.0;
    double inlier_error_without = 0.0;

    double relative_change() const;
};

struct CompareReport {
    std::size_t components = 0;
    std::vector<ImageComparison> images;
    double igo_clean_mean = 0.0;
    double l2_clean_mean = 0.0;
    double igo_corrupted_mean = 0.0;
    double l2_corrupted_mean = 0.0;
    double igo_flatness = 0.0;  // flatness of the retained IGO eigenvalues
    std::optional<OutlierSeparation> separation;  // replacement mode only
};

struct CompareOptions {
    std::size_t components = 5;
    GradientFilterSpec filter = {};
    double magnitude_floor = kDefaultMagnitudeFloor;
    Execution mode = Execution::serial;
};

/// Fits both estimators on the observed images and scores orientation
/// reconstructions against the clean images, separately on clean and
/// corrupted pixels. Throws ConfigError if ground truth is missing.
CompareReport compare(std::span<const GrayImage> observed, std::span<const GrayImage> clean,
                      std::span<const CorruptionRecord> corruption,
                      const CompareOptions& options);

/// Outlier-axis analysis for a dataset with whole-image replacements: fits a
/// full-rank IGO model, locates the axis of the first replaced image, and
/// compares mean inlier reconstruction error using the leading
/// max(5, l + 1) components with and without that axis.
OutlierSeparation outlier_separation(std::span<const GrayImage> observed,
                                     std::span<const CorruptionRecord> corruption,
                                     const CompareOptions& options);

}  // namespace igo::experiment
