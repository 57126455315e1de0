#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "igo/error.hpp"
#include "igo/experiment.hpp"
#include "igo/io.hpp"
#include "support.hpp"

namespace igo::experiment {
namespace {

using test::read_bytes;
using test::TempDir;

SynthConfig small_config() {
    SynthConfig c;
    c.count = 12;
    c.height = 32;
    c.width = 32;
    c.patch = 10;
    c.fraction = 0.25;
    return c;
}

TEST(Synthesize, CorruptsExactlyTheConfiguredFraction) {
    SynthConfig c;  // n = 50, fraction 0.2
    const auto ds = synthesize(c);
    EXPECT_EQ(ds.observed.size(), 50u);
    EXPECT_EQ(ds.corrupted_indices().size(), 10u);
    for (std::size_t i : ds.corrupted_indices()) {
        const auto& r = ds.corruption[i];
        EXPECT_EQ(r.kind, CorruptionKind::occlusion);
        EXPECT_EQ(r.w, 45u);
        EXPECT_EQ(r.h, 45u);
        EXPECT_LE(r.x + r.w, 128u);
        EXPECT_LE(r.y + r.h, 128u);
        EXPECT_NE(ds.observed[i], ds.clean[i]);
    }
}

TEST(Synthesize, FractionZeroLeavesImagesClean) {
    auto c = small_config();
    c.fraction = 0.0;
    const auto ds = synthesize(c);
    for (std::size_t i = 0; i < ds.observed.size(); ++i) {
        EXPECT_EQ(ds.corruption[i].kind, CorruptionKind::none);
        EXPECT_EQ(ds.observed[i], ds.clean[i]);
    }
}

TEST(Synthesize, OcclusionOnlyTouchesThePatch) {
    const auto ds = synthesize(small_config());
    for (std::size_t i : ds.corrupted_indices()) {
        const auto region = ds.corruption[i].region(32, 32);
        for (std::size_t k = 0; k < region.size(); ++k)
            if (!region[k]) EXPECT_EQ(ds.observed[i].pixels[k], ds.clean[i].pixels[k]);
    }
}

TEST(Synthesize, ReplacementUsesOneFixedImage) {
    auto c = small_config();
    c.mode = CorruptionKind::replacement;
    const auto ds = synthesize(c);
    const auto idx = ds.corrupted_indices();
    ASSERT_EQ(idx.size(), 3u);
    for (std::size_t i : idx) EXPECT_EQ(ds.observed[i], ds.observed[idx[0]]);
}

TEST(Synthesize, CleanImagesHaveLowRankStructure) {
    auto c = small_config();
    c.noise = 0.0;
    c.fraction = 0.0;
    const auto ds = synthesize(c);
    const auto model = l2_fit(ds.clean, 3);
    // Only quantization remains outside the rank-3 (centered) span.
    for (const auto& img : ds.clean) {
        const auto rec = l2_reconstruct(model, img);
        for (std::size_t k = 0; k < img.size(); ++k) EXPECT_NEAR(rec.pixels[k], img.pixels[k], 1e-4);
    }
}

TEST(Synthesize, DeterministicInSeed) {
    const auto a = synthesize(small_config());
    const auto b = synthesize(small_config());
    EXPECT_EQ(a.observed, b.observed);
    EXPECT_EQ(a.corruption, b.corruption);
    auto c = small_config();
    c.seed = 2;
    EXPECT_NE(synthesize(c).observed, a.observed);
}

TEST(Synthesize, ConfigValidation) {
    auto c = small_config();
    c.fraction = 1.5;
    EXPECT_THROW(synthesize(c), ConfigError);
    c = small_config();
    c.fraction = -0.1;
    EXPECT_THROW(synthesize(c), ConfigError);
    c = small_config();
    c.patch = 33;
    EXPECT_THROW(synthesize(c), ConfigError);
    c = small_config();
    c.count = 0;
    EXPECT_THROW(synthesize(c), ConfigError);
    c = small_config();
    c.rank = 0;
    EXPECT_THROW(synthesize(c), ConfigError);
}

TEST(Manifest, WriteReadRoundTrip) {
    TempDir dir;
    const auto ds = synthesize(small_config());
    const auto path = write_dataset(ds, dir.path());
    const auto m = read_manifest(path);
    ASSERT_EQ(m.entries.size(), 12u);
    EXPECT_EQ(m.parameters.at("seed"), "1");
    EXPECT_EQ(m.corrupted_indices(), ds.corrupted_indices());
    const auto loaded = load_dataset(m);
    EXPECT_EQ(loaded.observed, ds.observed);
    EXPECT_EQ(loaded.clean, ds.clean);
    EXPECT_EQ(loaded.corruption, ds.corruption);
    // Paths are resolved against the manifest directory.
    EXPECT_EQ(m.entries[0].path, dir.path() / "images" / "img_000.pgm");
    EXPECT_NE(format_manifest(m).find("corruption = occlusion"), std::string::npos);
}

TEST(Manifest, Errors) {
    TempDir dir;
    const auto path = write_dataset(synthesize(small_config()), dir.path());
    auto text = read_bytes(path);
    test::write_bytes(dir / "missing.txt",
                      text + "\n[image]\npath = images/nope.pgm\ncorruption = none\n");
    EXPECT_THROW(read_manifest(dir / "missing.txt"), ConfigError);
    test::write_bytes(dir / "rect.txt", text + "\n[image]\npath = images/img_000.pgm\n"
                                               "corruption = occlusion\nx = 30\ny = 0\nw = 5\nh = 5\n");
    EXPECT_THROW(read_manifest(dir / "rect.txt"), ConfigError);
    test::write_bytes(dir / "key.txt", text + "\n[image]\npath = images/img_000.pgm\nbogus = 1\n");
    EXPECT_THROW(read_manifest(dir / "key.txt"), ConfigError);
    test::write_bytes(dir / "kind.txt", text + "\n[image]\npath = images/img_000.pgm\ncorruption = x\n");
    EXPECT_THROW(read_manifest(dir / "kind.txt"), ConfigError);
    EXPECT_THROW(read_manifest(dir / "absent.txt"), ConfigError);
}

TEST(OrientationError, RegionAndValidity) {
    const auto a = test::random_angles(4, 4, 1);
    const auto b = test::random_angles(4, 4, 2);
    PixelMask all(16, 1), none(16, 0);
    double expected = 0.0;
    for (std::size_t k = 0; k < 16; ++k) expected += 1.0 - std::cos(a.angles[k] - b.angles[k]);
    EXPECT_NEAR(orientation_error(a, b, all), expected / 16.0, 1e-14);
    EXPECT_TRUE(std::isnan(orientation_error(a, b, none)));
    auto t = b;
    std::fill(t.valid.begin(), t.valid.end(), 0);
    EXPECT_TRUE(std::isnan(orientation_error(a, t, all)));
}

TEST(Compare, RequiresGroundTruth) {
    const auto ds = synthesize(small_config());
    EXPECT_THROW(compare(ds.observed, std::span<const GrayImage>{}, ds.corruption, {}), ConfigError);
}

TEST(Compare, OcclusionFavoursIgoAcrossSeeds) {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SynthConfig c;
        c.seed = seed;
        const auto ds = synthesize(c);
        CompareOptions opt;
        opt.mode = Execution::parallel;
        const auto r = compare(ds.observed, ds.clean, ds.corruption, opt);
        if (r.igo_clean_mean < r.l2_clean_mean) ++wins;
        EXPECT_EQ(r.images.size(), 50u);
        EXPECT_FALSE(r.separation.has_value());
    }
    EXPECT_GE(wins, 18);
}

TEST(Compare, UncorruptedDataWithinFactorTwo) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthConfig c;
        c.seed = seed;
        c.fraction = 0.0;
        const auto ds = synthesize(c);
        const auto r = compare(ds.observed, ds.clean, ds.corruption, {});
        const double ratio = r.igo_clean_mean / r.l2_clean_mean;
        EXPECT_GE(ratio, 0.5) << "seed " << seed;
        EXPECT_LE(ratio, 2.0) << "seed " << seed;
        EXPECT_TRUE(std::isnan(r.igo_corrupted_mean));
    }
}

TEST(Compare, ReplacementSeparatesOutlierAxis) {
    SynthConfig c;
    c.mode = CorruptionKind::replacement;
    const auto ds = synthesize(c);
    const auto r = compare(ds.observed, ds.clean, ds.corruption, {});
    ASSERT_TRUE(r.separation.has_value());
    const auto& s = *r.separation;
    EXPECT_TRUE(s.axis.found);
    EXPECT_GE(s.axis.alignment, 0.9);
    EXPECT_LE(std::abs(s.relative_change()), 0.05);
}

TEST(Compare, SerialAndParallelAgree) {
    const auto ds = synthesize(small_config());
    CompareOptions a, b;
    b.mode = Execution::parallel;
    const auto ra = compare(ds.observed, ds.clean, ds.corruption, a);
    const auto rb = compare(ds.observed, ds.clean, ds.corruption, b);
    EXPECT_EQ(ra.igo_clean_mean, rb.igo_clean_mean);
    EXPECT_EQ(ra.l2_clean_mean, rb.l2_clean_mean);
}

}  // namespace
}  // namespace igo::experiment
