#include "igo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace igo {

std::uint64_t Rng::below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double kolmogorov_q(double t) {
    if (!(t > 0.0)) return 1.0;
    constexpr double kTerm = 1e-12;
    if (t < 1.18) {
        // Dual theta-function form; converges fast for small t.
        const double pi2_8t2 = std::numbers::pi * std::numbers::pi / (8.0 * t * t);
        double cdf = 0.0;
        for (int j = 1; j < 100; ++j) {
            const double odd = 2.0 * j - 1.0;
            const double term = std::exp(-odd * odd * pi2_8t2);
            cdf += term;
            if (term < kTerm) break;
        }
        cdf *= std::sqrt(kTwoPi) / t;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int j = 1; j < 100; ++j) {
        const double term = std::exp(-2.0 * j * j * t * t);
        sum += (j % 2 == 1) ? term : -term;
        if (term < kTerm) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic_uniform(std::span<const double> samples) {
    if (samples.size() < 8) {
        throw SampleSizeError("KS test needs at least 8 samples, got " +
                              std::to_string(samples.size()));
    }
    std::vector<double> u(samples.begin(), samples.end());
    for (auto& x : u) {
        if (!(x >= 0.0 && x < kTwoPi)) throw DomainError("KS sample outside [0, 2pi)");
        x /= kTwoPi;
    }
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double upper = static_cast<double>(i + 1) / n - u[i];
        const double lower = u[i] - static_cast<double>(i) / n;
        d = std::max({d, upper, lower});
    }
    return std::min(d, 1.0);
}

KsResult ks_uniform_test(std::span<const double> samples, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
    KsResult r;
    r.statistic = ks_statistic_uniform(samples);
    r.sample_size = samples.size();
    const double sqrt_n = std::sqrt(static_cast<double>(samples.size()));
    r.p_value = kolmogorov_q((sqrt_n + 0.12 + 0.11 / sqrt_n) * r.statistic);
    r.accepted = r.p_value > alpha;
    return r;
}

KsResult dissimilarity_test(const OrientationImage& a, const OrientationImage& b, double alpha) {
    const auto diff = orientation_difference(a, b);
    std::vector<double> samples;
    samples.reserve(diff.size());
    for (std::size_t k = 0; k < diff.size(); ++k) {
        if (diff.valid[k]) samples.push_back(diff.angles[k]);
    }
    return ks_uniform_test(samples, alpha);
}

SpectrumReport spectrum_flatness(std::span<const double> eigenvalues, std::size_t pixels) {
    if (pixels == 0) throw DimensionError("spectrum_flatness needs a positive pixel count");
    SpectrumReport report;
    if (eigenvalues.empty()) return report;
    const double lambda_max = *std::max_element(eigenvalues.begin(), eigenvalues.end());
    const double floor = -1e-10 * std::max(1.0, lambda_max);
    const double p = static_cast<double>(pixels);
    report.normalized.reserve(eigenvalues.size());
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const double l = eigenvalues[i];
        if (l < floor) throw DomainError("negative eigenvalue " + std::to_string(l));
        if (i > 0 && l > eigenvalues[i - 1]) {
            throw DomainError("eigenvalues must be sorted in descending order");
        }
        report.normalized.push_back(l / p);
        report.flatness = std::max(report.flatness, std::abs(l / p - 1.0));
    }
    return report;
}

OrientationImage random_orientation_image(std::size_t height, std::size_t width,
                                          std::uint64_t seed) {
    if (height == 0 || width == 0) throw DimensionError("random image needs positive dimensions");
    Rng rng(seed);
    std::vector<double> angles(height * width);
    for (auto& a : angles) a = rng.angle();
    return OrientationImage(height, width, std::move(angles));
}

KsSummary summarize(std::span<const KsTrial> trials) {
    KsSummary s;
    s.trials = trials.size();
    double p_sum = 0.0;
    for (const auto& t : trials) {
        if (t.result.accepted) ++s.accepted;
        p_sum += t.result.p_value;
    }
    s.mean_p_value = trials.empty() ? 0.0 : p_sum / static_cast<double>(trials.size());
    return s;
}

std::vector<KsTrial> ks_generator_trials(std::size_t trials, std::size_t samples,
                                         std::uint64_t base_seed, double alpha,
                                         Execution mode) {
    std::vector<KsTrial> out(trials);
    parallel_for(trials, mode, [&](std::size_t t) {
        const std::uint64_t seed = base_seed + t;
        Rng rng(seed);
        std::vector<double> x(samples);
        for (auto& v : x) v = rng.angle();
        out[t] = {seed, ks_uniform_test(x, alpha)};
    });
    return out;
}

std::vector<KsTrial> ks_image_pair_trials(std::size_t trials, std::size_t height,
                                          std::size_t width, std::uint64_t base_seed,
                                          double alpha, Execution mode) {
    std::vector<KsTrial> out(trials);
    parallel_for(trials, mode, [&](std::size_t t) {
        const std::uint64_t seed = 2 * (base_seed + t);
        const auto a = random_orientation_image(height, width, seed);
        const auto b = random_orientation_image(height, width, seed + 1);
        out[t] = {seed, dissimilarity_test(a, b, alpha)};
    });
    return out;
}

}  // namespace igo
