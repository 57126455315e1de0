#include "igo/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "igo/io.hpp"
#include "igo/stats.hpp"

namespace igo::experiment {
namespace {

constexpr std::array<std::pair<int, int>, 10> kBasisFrequencies = {
    {{0, 1}, {1, 0}, {1, 1}, {2, 1}, {1, 2}, {2, 0}, {0, 2}, {2, 2}, {3, 1}, {1, 3}}};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::size_t parse_count(const std::string& value, const std::string& key, const fs::path& path) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != value.size()) {
        throw ConfigError("manifest '" + path.string() + "': '" + key +
                          "' expects a non-negative integer, got '" + value + "'");
    }
    return static_cast<std::size_t>(v);
}

double mean_ignoring_nan(const std::vector<double>& values) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        if (!std::isnan(v)) {
            sum += v;
            ++count;
        }
    }
    return count == 0 ? kNaN : sum / static_cast<double>(count);
}

std::vector<OrientationImage> orientations(std::span<const GrayImage> images,
                                           const CompareOptions& options) {
    std::vector<OrientationImage> out(images.size());
    parallel_for(images.size(), options.mode, [&](std::size_t i) {
        out[i] = compute_orientation(images[i], options.filter, options.magnitude_floor);
    });
    return out;
}

}  // namespace

std::string to_string(CorruptionKind kind) {
    switch (kind) {
        case CorruptionKind::none: return "none";
        case CorruptionKind::occlusion: return "occlusion";
        case CorruptionKind::replacement: return "replacement";
    }
    return "none";
}

CorruptionKind parse_corruption_kind(const std::string& text) {
    if (text == "none") return CorruptionKind::none;
    if (text == "occlusion") return CorruptionKind::occlusion;
    if (text == "replacement") return CorruptionKind::replacement;
    throw ConfigError("unknown corruption mode '" + text +
                      "' (expected none, occlusion or replacement)");
}

PixelMask CorruptionRecord::region(std::size_t height, std::size_t width) const {
    PixelMask mask(height * width, 0);
    if (kind == CorruptionKind::none) return mask;
    for (std::size_t r = y; r < std::min(height, y + h); ++r)
        for (std::size_t c = x; c < std::min(width, x + w); ++c) mask[r * width + c] = 1;
    return mask;
}

void SynthConfig::validate() const {
    if (count == 0) throw ConfigError("dataset needs at least one image");
    if (height < 3 || width < 3) throw ConfigError("image dimensions must be at least 3x3");
    if (rank == 0 || rank > kBasisFrequencies.size()) {
        throw ConfigError("rank must lie in [1, " + std::to_string(kBasisFrequencies.size()) + "]");
    }
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw ConfigError("corruption fraction must lie in [0, 1]");
    }
    if (mode == CorruptionKind::occlusion && (patch == 0 || patch > height || patch > width)) {
        throw ConfigError("occlusion patch of " + std::to_string(patch) +
                          " pixels does not fit a " + std::to_string(height) + "x" +
                          std::to_string(width) + " image");
    }
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw ConfigError("amplitude must be positive");
    }
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("noise must be non-negative");
}

std::vector<std::size_t> SyntheticDataset::corrupted_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < corruption.size(); ++i)
        if (corruption[i].kind != CorruptionKind::none) out.push_back(i);
    return out;
}

GrayImage cosine_basis_image(std::size_t height, std::size_t width, std::size_t index) {
    if (index >= kBasisFrequencies.size()) throw ConfigError("basis index out of range");
    const auto [fy, fx] = kBasisFrequencies[index];
    std::vector<double> px(height * width);
    for (std::size_t r = 0; r < height; ++r) {
        const double cy = std::cos(std::numbers::pi * fy * (static_cast<double>(r) + 0.5) /
                                   static_cast<double>(height));
        for (std::size_t c = 0; c < width; ++c) {
            const double cx = std::cos(std::numbers::pi * fx * (static_cast<double>(c) + 0.5) /
                                       static_cast<double>(width));
            px[r * width + c] = cy * cx;
        }
    }
    return GrayImage(height, width, std::move(px));
}

namespace {

std::vector<double> value_noise(std::size_t height, std::size_t width, std::uint64_t seed) {
    constexpr std::size_t kCell = 4;
    const std::size_t gh = height / kCell + 2;
    const std::size_t gw = width / kCell + 2;
    Rng rng(seed);
    std::vector<double> grid(gh * gw);
    for (auto& g : grid) g = rng.uniform();

    std::vector<double> px(height * width);
    for (std::size_t r = 0; r < height; ++r) {
        const std::size_t r0 = r / kCell;
        const double fy = static_cast<double>(r % kCell) / kCell;
        for (std::size_t c = 0; c < width; ++c) {
            const std::size_t c0 = c / kCell;
            const double fx = static_cast<double>(c % kCell) / kCell;
            const double a = grid[r0 * gw + c0];
            const double b = grid[r0 * gw + c0 + 1];
            const double d = grid[(r0 + 1) * gw + c0];
            const double e = grid[(r0 + 1) * gw + c0 + 1];
            px[r * width + c] =
                a * (1 - fy) * (1 - fx) + b * (1 - fy) * fx + d * fy * (1 - fx) + e * fy * fx;
        }
    }
    return px;
}

}  // namespace

GrayImage value_noise_texture(std::size_t height, std::size_t width, std::uint64_t seed) {
    return GrayImage(height, width, value_noise(height, width, seed));
}

SyntheticDataset synthesize(const SynthConfig& config) {
    config.validate();
    const auto h = config.height;
    const auto w = config.width;
    const auto p = h * w;

    std::vector<GrayImage> basis;
    for (std::size_t r = 0; r < config.rank; ++r) basis.push_back(cosine_basis_image(h, w, r));

    Rng rng(config.seed);
    SyntheticDataset ds;
    ds.config = config;
    for (std::size_t i = 0; i < config.count; ++i) {
        std::vector<double> weights(config.rank);
        weights[0] = rng.uniform(0.8, 1.2);
        for (std::size_t r = 1; r < config.rank; ++r) weights[r] = rng.uniform(-1.0, 1.0);
        std::vector<double> px(p, 0.5);
        for (std::size_t r = 0; r < config.rank; ++r)
            for (std::size_t k = 0; k < p; ++k)
                px[k] += config.amplitude * weights[r] * basis[r].pixels[k];
        if (config.noise > 0.0)
            for (auto& v : px) v += config.noise * rng.normal();
        ds.clean.push_back(io::quantize(GrayImage(h, w, std::move(px))));
    }

    ds.observed = ds.clean;
    ds.corruption.assign(config.count, {});
    if (config.mode == CorruptionKind::none || config.fraction == 0.0) return ds;

    const auto corrupt = static_cast<std::size_t>(
        std::lround(config.fraction * static_cast<double>(config.count)));
    std::vector<std::size_t> order(config.count);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < corrupt; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(config.count - i));
        std::swap(order[i], order[j]);
    }
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(corrupt));
    std::sort(chosen.begin(), chosen.end());

    if (config.mode == CorruptionKind::occlusion) {
        const auto texture = value_noise(config.patch, config.patch, kTextureSeed);
        for (std::size_t i : chosen) {
            const auto x = static_cast<std::size_t>(rng.below(w - config.patch + 1));
            const auto y = static_cast<std::size_t>(rng.below(h - config.patch + 1));
            auto& img = ds.observed[i];
            for (std::size_t r = 0; r < config.patch; ++r)
                for (std::size_t c = 0; c < config.patch; ++c)
                    img.at(y + r, x + c) = texture[r * config.patch + c];
            img = io::quantize(img);
            ds.corruption[i] = {CorruptionKind::occlusion, x, y, config.patch, config.patch,
                                "value-noise"};
        }
    } else {
        const auto texture = io::quantize(value_noise_texture(h, w, kTextureSeed + 1));
        for (std::size_t i : chosen) {
            ds.observed[i] = texture;
            ds.corruption[i] = {CorruptionKind::replacement, 0, 0, w, h, "value-noise"};
        }
    }
    return ds;
}

std::vector<std::size_t> DatasetManifest::corrupted_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].corruption.kind != CorruptionKind::none) out.push_back(i);
    return out;
}

std::string format_manifest(const DatasetManifest& manifest) {
    std::ostringstream os;
    os << "# igo-manifest v1\n";
    if (!manifest.parameters.empty()) {
        os << "[dataset]\n";
        for (const auto& [key, value] : manifest.parameters) os << key << " = " << value << "\n";
    }
    for (const auto& e : manifest.entries) {
        os << "\n[image]\n";
        os << "path = " << e.path.generic_string() << "\n";
        if (e.clean) os << "clean = " << e.clean->generic_string() << "\n";
        os << "corruption = " << to_string(e.corruption.kind) << "\n";
        if (e.corruption.kind != CorruptionKind::none) {
            os << "x = " << e.corruption.x << "\ny = " << e.corruption.y << "\nw = "
               << e.corruption.w << "\nh = " << e.corruption.h << "\n";
            if (!e.corruption.source.empty()) os << "source = " << e.corruption.source << "\n";
        }
        os << "split = " << e.split << "\n";
    }
    return os.str();
}

fs::path write_dataset(const SyntheticDataset& dataset, const fs::path& directory) {
    const auto& cfg = dataset.config;
    DatasetManifest manifest;
    manifest.parameters = {{"count", std::to_string(cfg.count)},
                           {"height", std::to_string(cfg.height)},
                           {"width", std::to_string(cfg.width)},
                           {"rank", std::to_string(cfg.rank)},
                           {"mode", to_string(cfg.mode)},
                           {"fraction", io::format_double(cfg.fraction)},
                           {"patch", std::to_string(cfg.patch)},
                           {"seed", std::to_string(cfg.seed)},
                           {"amplitude", io::format_double(cfg.amplitude)},
                           {"noise", io::format_double(cfg.noise)}};
    for (std::size_t i = 0; i < dataset.observed.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "img_%03zu.pgm", i);
        ManifestEntry e;
        e.path = fs::path("images") / name;
        e.clean = fs::path("clean") / name;
        e.corruption = dataset.corruption[i];
        io::save_pgm(dataset.observed[i], directory / e.path);
        io::save_pgm(dataset.clean[i], directory / *e.clean);
        manifest.entries.push_back(std::move(e));
    }
    const auto path = directory / "manifest.txt";
    io::write_file_atomic(path, format_manifest(manifest));
    return path;
}

DatasetManifest read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path.string() + "'");
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

    DatasetManifest manifest;
    enum class Section { none, dataset, image } section = Section::none;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigError("manifest '" + path.string() + "' line " + std::to_string(line_no) +
                          ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (line == "[dataset]") {
            section = Section::dataset;
            continue;
        }
        if (line == "[image]") {
            section = Section::image;
            manifest.entries.emplace_back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (section == Section::dataset) {
            manifest.parameters[key] = value;
        } else if (section == Section::image) {
            auto& e = manifest.entries.back();
            if (key == "path") e.path = value;
            else if (key == "clean") e.clean = fs::path(value);
            else if (key == "corruption") e.corruption.kind = parse_corruption_kind(value);
            else if (key == "x") e.corruption.x = parse_count(value, key, path);
            else if (key == "y") e.corruption.y = parse_count(value, key, path);
            else if (key == "w") e.corruption.w = parse_count(value, key, path);
            else if (key == "h") e.corruption.h = parse_count(value, key, path);
            else if (key == "source") e.corruption.source = value;
            else if (key == "split") e.split = value;
            else fail("unknown image key '" + key + "'");
        } else {
            fail("entry outside of a [dataset] or [image] block");
        }
    }

    std::optional<std::size_t> height, width;
    if (auto it = manifest.parameters.find("height"); it != manifest.parameters.end())
        height = parse_count(it->second, "height", path);
    if (auto it = manifest.parameters.find("width"); it != manifest.parameters.end())
        width = parse_count(it->second, "width", path);

    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        auto& e = manifest.entries[i];
        const std::string tag = "manifest '" + path.string() + "' image " + std::to_string(i);
        if (e.path.empty()) throw ConfigError(tag + " has no path");
        e.path = base / e.path;
        if (!fs::exists(e.path)) throw ConfigError(tag + ": missing file '" + e.path.string() + "'");
        if (e.clean) {
            e.clean = base / *e.clean;
            if (!fs::exists(*e.clean)) {
                throw ConfigError(tag + ": missing file '" + e.clean->string() + "'");
            }
        }
        const auto& c = e.corruption;
        if (c.kind != CorruptionKind::none && height && width &&
            (c.x + c.w > *width || c.y + c.h > *height || c.w == 0 || c.h == 0)) {
            throw ConfigError(tag + ": corruption rectangle lies outside the image");
        }
    }
    return manifest;
}

LoadedDataset load_dataset(const DatasetManifest& manifest) {
    LoadedDataset ds;
    bool all_clean = !manifest.entries.empty();
    for (const auto& e : manifest.entries) all_clean = all_clean && e.clean.has_value();
    for (const auto& e : manifest.entries) {
        ds.observed.push_back(io::load_image(e.path));
        const auto& img = ds.observed.back();
        const auto& c = e.corruption;
        if (c.kind != CorruptionKind::none &&
            (c.x + c.w > img.width || c.y + c.h > img.height || c.w == 0 || c.h == 0)) {
            throw ConfigError("corruption rectangle of '" + e.path.string() +
                              "' lies outside the image");
        }
        if (all_clean) ds.clean.push_back(io::load_image(*e.clean));
        ds.corruption.push_back(c);
    }
    return ds;
}

double orientation_error(const OrientationImage& estimate, const OrientationImage& truth,
                         std::span<const std::uint8_t> region) {
    if (estimate.height != truth.height || estimate.width != truth.width ||
        region.size() != truth.size()) {
        throw DimensionError("orientation_error: size mismatch");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (!region[k] || !truth.valid[k]) continue;
        sum += 1.0 - std::cos(estimate.angles[k] - truth.angles[k]);
        ++count;
    }
    return count == 0 ? kNaN : sum / static_cast<double>(count);
}

double OutlierSeparation::relative_change() const {
    if (inlier_error_with == 0.0) return inlier_error_without == 0.0 ? 0.0 : 1.0;
    return std::abs(inlier_error_without - inlier_error_with) / inlier_error_with;
}

CompareReport compare(std::span<const GrayImage> observed, std::span<const GrayImage> clean,
                      std::span<const CorruptionRecord> corruption,
                      const CompareOptions& options) {
    if (clean.size() != observed.size() || clean.empty()) {
        throw ConfigError("comparison needs ground-truth clean images for every input image");
    }
    if (corruption.size() != observed.size()) {
        throw ConfigError("comparison needs one corruption record per image");
    }
    const auto obs = orientations(observed, options);
    const auto truth = orientations(clean, options);

    IgoFitOptions fit_options;
    fit_options.mode = options.mode;
    fit_options.filter = options.filter;
    fit_options.magnitude_floor = options.magnitude_floor;
    const auto igo_model = fit(obs, options.components, fit_options);
    const auto igo_recon = batch_reconstruct(igo_model, obs, options.mode);

    const auto l2_model = l2_fit(observed, options.components, options.mode);

    CompareReport report;
    report.components = options.components;
    report.images.resize(observed.size());
    parallel_for(observed.size(), options.mode, [&](std::size_t i) {
        const auto& img = observed[i];
        const auto corrupted = corruption[i].region(img.height, img.width);
        PixelMask intact(corrupted.size());
        for (std::size_t k = 0; k < corrupted.size(); ++k) intact[k] = corrupted[k] ? 0 : 1;

        const auto l2_recon = l2_reconstruct(l2_model, img);
        const auto l2_orient = compute_orientation(l2_recon, options.filter, options.magnitude_floor);

        auto& row = report.images[i];
        row.index = i;
        row.corruption = corruption[i].kind;
        row.igo_clean = orientation_error(igo_recon[i].orientation, truth[i], intact);
        row.igo_corrupted = orientation_error(igo_recon[i].orientation, truth[i], corrupted);
        row.l2_clean = orientation_error(l2_orient, truth[i], intact);
        row.l2_corrupted = orientation_error(l2_orient, truth[i], corrupted);

        double sq = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < intact.size(); ++k) {
            if (!intact[k]) continue;
            const double d = l2_recon.pixels[k] - clean[i].pixels[k];
            sq += d * d;
            ++count;
        }
        row.l2_clean_rmse = count == 0 ? kNaN : std::sqrt(sq / static_cast<double>(count));
    });

    std::vector<double> ic, lc, ix, lx;
    for (const auto& r : report.images) {
        ic.push_back(r.igo_clean);
        lc.push_back(r.l2_clean);
        ix.push_back(r.igo_corrupted);
        lx.push_back(r.l2_corrupted);
    }
    report.igo_clean_mean = mean_ignoring_nan(ic);
    report.l2_clean_mean = mean_ignoring_nan(lc);
    report.igo_corrupted_mean = mean_ignoring_nan(ix);
    report.l2_corrupted_mean = mean_ignoring_nan(lx);
    report.igo_flatness =
        spectrum_flatness(igo_model.subspace.eigenvalues, igo_model.pixels()).flatness;

    const bool replaced = std::any_of(corruption.begin(), corruption.end(), [](const auto& c) {
        return c.kind == CorruptionKind::replacement;
    });
    if (replaced) report.separation = outlier_separation(observed, corruption, options);
    return report;
}

OutlierSeparation outlier_separation(std::span<const GrayImage> observed,
                                     std::span<const CorruptionRecord> corruption,
                                     const CompareOptions& options) {
    if (corruption.size() != observed.size()) {
        throw ConfigError("outlier analysis needs one corruption record per image");
    }
    const auto it = std::find_if(corruption.begin(), corruption.end(), [](const auto& c) {
        return c.kind == CorruptionKind::replacement;
    });
    if (it == corruption.end()) throw ConfigError("dataset has no replaced image");

    OutlierSeparation out;
    out.outlier_index = static_cast<std::size_t>(it - corruption.begin());
    const auto obs = orientations(observed, options);
    const auto spectrum = orientation_spectrum(obs, options.mode);
    out.rank = numerical_rank(spectrum, obs.size());

    IgoFitOptions fit_options;
    fit_options.mode = options.mode;
    fit_options.filter = options.filter;
    fit_options.magnitude_floor = options.magnitude_floor;
    const auto model = fit(obs, out.rank, fit_options);
    out.axis = find_outlier_axis(model, obs, out.outlier_index);

    const std::size_t leading = std::min(out.rank, std::max<std::size_t>(5, out.axis.component + 1));
    out.evaluated_components = leading;
    std::vector<std::size_t> with, without;
    for (std::size_t j = 0; j < leading; ++j) {
        with.push_back(j);
        if (j != out.axis.component) without.push_back(j);
    }
    const auto model_with = select_components(model, with);
    const auto model_without = select_components(model, without);

    std::vector<double> err_with, err_without;
    const PixelMask everywhere(model.pixels(), 1);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (corruption[i].kind != CorruptionKind::none) continue;
        err_with.push_back(
            orientation_error(reconstruct(model_with, obs[i]).orientation, obs[i], everywhere));
        err_without.push_back(
            orientation_error(reconstruct(model_without, obs[i]).orientation, obs[i], everywhere));
    }
    out.inlier_error_with = mean_ignoring_nan(err_with);
    out.inlier_error_without = mean_ignoring_nan(err_without);

    // Reference: how well any l2 component captures the replacement image.
    const auto l2_model =
        l2_fit(observed, std::min(options.components, observed.size() - 1), options.mode);
    const auto& x = observed[out.outlier_index];
    double norm = 0.0;
    std::vector<double> centred(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        centred[k] = x.pixels[k] - l2_model.mean[k];
        norm += centred[k] * centred[k];
    }
    norm = std::sqrt(norm);
    const auto& b = l2_model.subspace.basis;
    for (std::size_t j = 0; j < b.cols() && norm > 0.0; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) dot += b(k, j) * centred[k];
        out.l2_alignment = std::max(out.l2_alignment, std::abs(dot) / norm);
    }
    return out;
}

}  // namespace igo::experiment
