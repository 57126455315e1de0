#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "igo/orientation.hpp"
#include "igo/parallel.hpp"

namespace igo {

/// Seedable generator used for every Monte Carlo number in the project.
///
/// Engine: std::mt19937_64 seeded with the raw 64-bit seed. Doubles are built
/// from the top 53 bits, (x >> 11) * 2^-53, so draws are bit-identical on any
/// conforming standard library (unlike std::uniform_real_distribution).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform angle in [0, 2pi).
    double angle() { return wrap_angle(kTwoPi * uniform()); }
    /// Uniform integer in [0, n), n > 0 (multiply-shift, no modulo bias beyond 2^-64).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal via Box-Muller (one draw per call, second value discarded).
    double normal();

private:
    std::mt19937_64 engine_;
};

struct KsResult {
    double statistic = 0.0;  // D in [0, 1]
    double p_value = 1.0;
    std::size_t sample_size = 0;
    bool accepted = false;  // p_value > alpha
};

/// Survival function of the Kolmogorov distribution, Q(t) = P(K > t).
double kolmogorov_q(double t);

/// D = sup |F_n(x) - x / 2pi| via the order-statistics formula. Throws
/// DomainError for samples outside [0, 2pi), SampleSizeError when n < 8.
double ks_statistic_uniform(std::span<const double> samples);

/// One-sample KS test of H0: samples ~ U[0, 2pi). The p-value is
/// Q((sqrt(n) + 0.12 + 0.11 / sqrt(n)) D); accepted = p_value > alpha.
KsResult ks_uniform_test(std::span<const double> samples, double alpha);

/// KS test of the orientation differences a - b over jointly valid pixels.
KsResult dissimilarity_test(const OrientationImage& a, const OrientationImage& b, double alpha);

struct SpectrumReport {
    std::vector<double> normalized;  // lambda_i / p, descending
    double flatness = 0.0;  // max_i |lambda_i / p - 1|
};

/// Normalizes an eigenvalue spectrum by the pixel count. Round-off negatives
/// down to -1e-10 * max(1, lambda_max) are tolerated; anything lower raises
/// DomainError.
SpectrumReport spectrum_flatness(std::span<const double> eigenvalues, std::size_t pixels);

/// i.i.d. U[0, 2pi) angles, every pixel valid, deterministic in the seed.
OrientationImage random_orientation_image(std::size_t height, std::size_t width,
                                          std::uint64_t seed);

/// One row of a Monte Carlo KS experiment.
struct KsTrial {
    std::uint64_t seed = 0;
    KsResult result;
};

struct KsSummary {
    std::size_t trials = 0;
    std::size_t accepted = 0;
    double mean_p_value = 0.0;

    double acceptance_rate() const noexcept {
        return trials == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(trials);
    }
};

KsSummary summarize(std::span<const KsTrial> trials);

/// Trial t draws `samples` uniform angles from Rng(base_seed + t) and tests them.
std::vector<KsTrial> ks_generator_trials(std::size_t trials, std::size_t samples,
                                         std::uint64_t base_seed, double alpha,
                                         Execution mode = Execution::serial);

/// Trial t compares random_orientation_image(seed 2t') with seed 2t' + 1
/// where t' = base_seed + t; the recorded seed is the first of the pair.
std::vector<KsTrial> ks_image_pair_trials(std::size_t trials, std::size_t height,
                                          std::size_t width, std::uint64_t base_seed,
                                          double alpha, Execution mode = Execution::serial);

}  // namespace igo
