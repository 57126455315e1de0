#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "igo/baseline_l2.hpp"
#include "igo/experiment.hpp"
#include "igo/igo_pca.hpp"
#include "igo/io.hpp"
#include "igo/stats.hpp"

namespace igo::cli {
namespace {

namespace fs = std::filesystem;
using igo::io::CsvDocument;
using igo::io::format_double;

struct FilterFlags {
    std::string kind = "central-difference";
    double sigma = 1.0;
    double magnitude_floor = kDefaultMagnitudeFloor;

    GradientFilterSpec spec() const {
        GradientFilterSpec f;
        f.kind = parse_filter_kind(kind);
        f.sigma = sigma;
        f.half_width();  // validates sigma
        return f;
    }
};

void add_filter_flags(CLI::App* cmd, FilterFlags& flags) {
    cmd->add_option("--filter", flags.kind, "central-difference | gaussian-derivative")
        ->capture_default_str();
    cmd->add_option("--sigma", flags.sigma, "Gaussian-derivative scale")->capture_default_str();
    cmd->add_option("--magnitude-floor", flags.magnitude_floor,
                    "gradient magnitude at or below which a pixel is invalid")
        ->capture_default_str();
}

std::string fmt(double v) { return std::isnan(v) ? "nan" : format_double(v); }

// synth -----------------------------------------------------------------------

struct SynthArgs {
    experiment::SynthConfig config;
    std::string mode = "occlusion";
    fs::path out;
};

void run_synth(SynthArgs& a, std::ostream& out) {
    a.config.mode = experiment::parse_corruption_kind(a.mode);
    const auto ds = experiment::synthesize(a.config);
    const auto manifest = experiment::write_dataset(ds, a.out);
    out << "wrote " << ds.observed.size() << " images (" << ds.corrupted_indices().size()
        << " corrupted) to " << manifest.string() << "\n";
}

// fit -------------------------------------------------------------------------

struct FitArgs {
    fs::path manifest;
    std::string method = "igo";
    std::size_t k = 5;
    bool center = false;
    FilterFlags filter;
    fs::path out;
};

void run_fit(const FitArgs& a, Execution mode, std::ostream& out) {
    const auto manifest = experiment::read_manifest(a.manifest);
    const auto data = experiment::load_dataset(manifest);
    std::vector<double> eigenvalues;
    std::size_t pixels = 0;
    if (a.method == "igo") {
        IgoFitOptions opt;
        opt.center = a.center;
        opt.mode = mode;
        opt.filter = a.filter.spec();
        opt.magnitude_floor = a.filter.magnitude_floor;
        std::vector<OrientationImage> phi;
        for (const auto& img : data.observed)
            phi.push_back(compute_orientation(img, opt.filter, opt.magnitude_floor));
        const auto model = fit(phi, a.k, opt);
        io::save_model(model, a.out);
        eigenvalues = model.subspace.eigenvalues;
        pixels = model.pixels();
    } else if (a.method == "l2") {
        const auto model = l2_fit(data.observed, a.k, mode);
        io::save_model(model, a.out);
        eigenvalues = model.subspace.eigenvalues;
        pixels = model.pixels();
    } else {
        throw ConfigError("unknown method '" + a.method + "' (expected igo or l2)");
    }
    out << "component,eigenvalue,normalized\n";
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        out << i << "," << format_double(eigenvalues[i]) << ","
            << format_double(eigenvalues[i] / static_cast<double>(pixels)) << "\n";
    }
    out << "saved " << a.method << " model with k = " << eigenvalues.size() << " to "
        << a.out.string() << "\n";
}

// reconstruct -----------------------------------------------------------------

struct ReconstructArgs {
    fs::path model;
    std::vector<fs::path> images;
    FilterFlags filter;
    fs::path out;
};

bool is_orientation_file(const fs::path& p) { return p.extension() == ".igoo"; }

void run_reconstruct(const ReconstructArgs& a, Execution mode, std::ostream& out) {
    const auto any = io::load_model(a.model);
    CsvDocument csv("igo-reconstruct", 1, {"image", "d2_per_p", "valid_fraction"});
    fs::create_directories(a.out);

    struct Row {
        double d2 = 0.0;
        double valid = 0.0;
    };
    std::vector<Row> rows(a.images.size());

    if (const auto* model = std::get_if<IgoModel>(&any)) {
        std::vector<OrientationImage> phi;
        for (const auto& path : a.images) {
            phi.push_back(is_orientation_file(path)
                              ? io::load_orientation(path)
                              : compute_orientation(io::load_image(path), model->filter,
                                                    model->magnitude_floor));
        }
        const auto recon = batch_reconstruct(*model, phi, mode);
        for (std::size_t i = 0; i < recon.size(); ++i) {
            const auto& o = recon[i].orientation;
            rows[i].d2 = cosine_distance(o, phi[i]) / static_cast<double>(o.size());
            rows[i].valid = static_cast<double>(std::count(o.valid.begin(), o.valid.end(), 1)) /
                            static_cast<double>(o.size());
            io::save_orientation(o, a.out / (a.images[i].stem().string() + ".igoo"));
        }
    } else {
        const auto& l2 = std::get<L2Model>(any);
        const auto spec = a.filter.spec();
        parallel_for(a.images.size(), mode, [&](std::size_t i) {
            if (is_orientation_file(a.images[i])) {
                throw ConfigError("l2 models reconstruct intensity images, not '" +
                                  a.images[i].string() + "'");
            }
            const auto img = io::load_image(a.images[i]);
            const auto recon = l2_reconstruct(l2, img);
            const auto truth = compute_orientation(img, spec, a.filter.magnitude_floor);
            const auto o = compute_orientation(recon, spec, a.filter.magnitude_floor);
            rows[i].d2 = cosine_distance(o, truth) / static_cast<double>(o.size());
            rows[i].valid = static_cast<double>(std::count(o.valid.begin(), o.valid.end(), 1)) /
                            static_cast<double>(o.size());
            const auto stem = a.images[i].stem().string();
            io::save_orientation(o, a.out / (stem + ".igoo"));
            io::save_pgm(recon, a.out / (stem + ".pgm"));
        });
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        csv.add_row({a.images[i].string(), format_double(rows[i].d2), format_double(rows[i].valid)});
    csv.save(a.out / "reconstruct.csv");
    out << "reconstructed " << rows.size() << " images into " << a.out.string() << "\n";
}

// compare ---------------------------------------------------------------------

struct CompareArgs {
    fs::path manifest;
    std::size_t k = 5;
    FilterFlags filter;
    fs::path out;
};

void run_compare(const CompareArgs& a, Execution mode, std::ostream& out) {
    const auto manifest = experiment::read_manifest(a.manifest);
    const auto data = experiment::load_dataset(manifest);
    if (data.clean.size() != data.observed.size()) {
        throw ConfigError("manifest '" + a.manifest.string() +
                          "' lacks ground-truth 'clean' images required by compare");
    }
    experiment::CompareOptions opt;
    opt.components = a.k;
    opt.filter = a.filter.spec();
    opt.magnitude_floor = a.filter.magnitude_floor;
    opt.mode = mode;
    const auto report = experiment::compare(data.observed, data.clean, data.corruption, opt);

    CsvDocument csv("igo-compare", 1,
                    {"index", "corruption", "igo_clean", "igo_corrupted", "l2_clean",
                     "l2_corrupted", "l2_clean_rmse"});
    for (const auto& r : report.images) {
        csv.add_row({std::to_string(r.index), experiment::to_string(r.corruption), fmt(r.igo_clean),
                     fmt(r.igo_corrupted), fmt(r.l2_clean), fmt(r.l2_corrupted),
                     fmt(r.l2_clean_rmse)});
    }
    csv.save(a.out);

    out << "components: " << report.components << "\n"
        << "igo clean-region error (d2/p): " << fmt(report.igo_clean_mean) << "\n"
        << "l2 clean-region error (d2/p): " << fmt(report.l2_clean_mean) << "\n"
        << "igo corrupted-region error (d2/p): " << fmt(report.igo_corrupted_mean) << "\n"
        << "l2 corrupted-region error (d2/p): " << fmt(report.l2_corrupted_mean) << "\n"
        << "igo spectrum flatness: " << fmt(report.igo_flatness) << "\n";
    if (report.separation) {
        const auto& s = *report.separation;
        out << "outlier image: " << s.outlier_index << "\n"
            << "outlier axis: component " << s.axis.component << " of " << s.rank
            << ", alignment " << fmt(s.axis.alignment) << (s.axis.found ? " (found)" : " (not found)")
            << "\n"
            << "inlier error with/without axis (" << s.evaluated_components
            << " leading components): " << fmt(s.inlier_error_with) << " / "
            << fmt(s.inlier_error_without) << "\n"
            << "l2 best alignment with outlier: " << fmt(s.l2_alignment) << "\n";
    }
    out << "wrote " << a.out.string() << "\n";
}

// kstest ----------------------------------------------------------------------

struct KsArgs {
    fs::path directory;
    std::size_t height = 100;
    std::size_t width = 100;
    std::uint64_t seed = 1;
    double alpha = 0.01;
    std::size_t trials = 1000;
    FilterFlags filter;
    fs::path out;
};

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ConfigError("'" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".pgm" || ext == ".png")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

void run_kstest(const KsArgs& a, Execution mode, std::ostream& out) {
    if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw DomainError("--alpha must lie in (0, 1)");
    std::vector<KsTrial> trials;
    if (!a.directory.empty()) {
        const auto files = list_images(a.directory);
        if (files.size() < 2) {
            throw ConfigError("directory '" + a.directory.string() +
                              "' holds fewer than 2 images");
        }
        const auto spec = a.filter.spec();
        std::vector<OrientationImage> phi;
        for (const auto& f : files)
            phi.push_back(compute_orientation(io::load_image(f), spec, a.filter.magnitude_floor));
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < phi.size() && pairs.size() < a.trials; ++i)
            for (std::size_t j = i + 1; j < phi.size() && pairs.size() < a.trials; ++j)
                pairs.emplace_back(i, j);
        trials.resize(pairs.size());
        parallel_for(pairs.size(), mode, [&](std::size_t t) {
            trials[t] = {t, dissimilarity_test(phi[pairs[t].first], phi[pairs[t].second], a.alpha)};
        });
    } else {
        trials = ks_image_pair_trials(a.trials, a.height, a.width, a.seed, a.alpha, mode);
    }

    CsvDocument csv("igo-kstest", 1, {"seed", "n", "D", "p_value", "accepted"});
    for (const auto& t : trials) {
        csv.add_row({std::to_string(t.seed), std::to_string(t.result.sample_size),
                     format_double(t.result.statistic), format_double(t.result.p_value),
                     t.result.accepted ? "1" : "0"});
    }
    csv.save(a.out);
    const auto s = summarize(trials);
    out << "trials: " << s.trials << "\n"
        << "accepted: " << s.accepted << "\n"
        << "acceptance rate: " << format_double(s.acceptance_rate()) << "\n"
        << "mean p-value: " << format_double(s.mean_p_value) << "\n";
}

// spectrum --------------------------------------------------------------------

struct SpectrumArgs {
    fs::path manifest;
    std::size_t count = 20;
    std::size_t height = 200;
    std::size_t width = 200;
    std::uint64_t seed = 1;
    FilterFlags filter;
    fs::path out;
};

void run_spectrum(const SpectrumArgs& a, Execution mode, std::ostream& out) {
    std::vector<OrientationImage> phi;
    if (!a.manifest.empty()) {
        const auto data = experiment::load_dataset(experiment::read_manifest(a.manifest));
        const auto spec = a.filter.spec();
        for (const auto& img : data.observed)
            phi.push_back(compute_orientation(img, spec, a.filter.magnitude_floor));
    } else {
        if (a.count == 0) throw ConfigError("--n must be positive");
        for (std::size_t i = 0; i < a.count; ++i)
            phi.push_back(random_orientation_image(a.height, a.width, a.seed + i));
    }
    const auto eigenvalues = orientation_spectrum(phi, mode);
    const auto report = spectrum_flatness(eigenvalues, phi.front().size());

    CsvDocument csv("igo-spectrum", 1, {"index", "eigenvalue", "normalized"});
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        csv.add_row({std::to_string(i), format_double(eigenvalues[i]),
                     format_double(report.normalized[i])});
    }
    csv.save(a.out);
    out << "images: " << phi.size() << "\n"
        << "pixels: " << phi.front().size() << "\n"
        << "flatness: " << format_double(report.flatness) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Principal component analysis of image gradient orientations", "igopca"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option defaults");
    bool serial = false;
    app.add_flag("--serial", serial, "single-threaded reference execution");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic low-rank dataset");
    synth_cmd->add_option("--n", synth.config.count, "number of images")->capture_default_str();
    synth_cmd->add_option("--height", synth.config.height)->capture_default_str();
    synth_cmd->add_option("--width", synth.config.width)->capture_default_str();
    synth_cmd->add_option("--rank", synth.config.rank, "rank of the clean signal")
        ->capture_default_str();
    synth_cmd->add_option("--mode", synth.mode, "none | occlusion | replacement")
        ->capture_default_str();
    synth_cmd->add_option("--fraction", synth.config.fraction, "fraction of corrupted images")
        ->capture_default_str();
    synth_cmd->add_option("--patch", synth.config.patch, "occlusion patch side in pixels")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.config.seed)->capture_default_str();
    synth_cmd->add_option("--amplitude", synth.config.amplitude)->capture_default_str();
    synth_cmd->add_option("--noise", synth.config.noise, "pixel noise standard deviation")
        ->capture_default_str();
    synth_cmd->add_option("--out", synth.out, "output directory")->required();

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "fit an IGO-PCA or l2 PCA model");
    fit_cmd->add_option("--manifest", fit_args.manifest)->required();
    fit_cmd->add_option("--method", fit_args.method, "igo | l2")->capture_default_str();
    fit_cmd->add_option("--k", fit_args.k, "number of components")->capture_default_str();
    fit_cmd->add_flag("--center", fit_args.center, "subtract the mean embedding (igo only)");
    add_filter_flags(fit_cmd, fit_args.filter);
    fit_cmd->add_option("--out", fit_args.out, "model file")->required();

    ReconstructArgs rec;
    auto* rec_cmd = app.add_subcommand("reconstruct", "project images onto a fitted model");
    rec_cmd->add_option("--model", rec.model)->required();
    rec_cmd->add_option("images", rec.images, "PGM/PNG images or .igoo orientation files")
        ->required();
    add_filter_flags(rec_cmd, rec.filter);
    rec_cmd->add_option("--out", rec.out, "output directory")->required();

    CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand("compare", "IGO-PCA versus l2 PCA on a synthetic dataset");
    cmp_cmd->add_option("--manifest", cmp.manifest)->required();
    cmp_cmd->add_option("--k", cmp.k)->capture_default_str();
    add_filter_flags(cmp_cmd, cmp.filter);
    cmp_cmd->add_option("--out", cmp.out, "CSV report")->required();

    KsArgs ks;
    auto* ks_cmd = app.add_subcommand("kstest", "KS uniformity test of orientation differences");
    ks_cmd->add_option("--dir", ks.directory, "directory of images to pair");
    ks_cmd->add_option("--height", ks.height, "synthetic image height")->capture_default_str();
    ks_cmd->add_option("--width", ks.width, "synthetic image width")->capture_default_str();
    ks_cmd->add_option("--seed", ks.seed)->capture_default_str();
    ks_cmd->add_option("--alpha", ks.alpha, "significance level")->capture_default_str();
    ks_cmd->add_option("--trials", ks.trials, "number of pairs")->capture_default_str();
    add_filter_flags(ks_cmd, ks.filter);
    ks_cmd->add_option("--out", ks.out, "CSV of per-trial results")->required();

    SpectrumArgs sp;
    auto* sp_cmd = app.add_subcommand("spectrum", "normalized eigen-spectrum of orientation images");
    sp_cmd->add_option("--manifest", sp.manifest);
    sp_cmd->add_option("--n", sp.count, "synthetic image count")->capture_default_str();
    sp_cmd->add_option("--height", sp.height)->capture_default_str();
    sp_cmd->add_option("--width", sp.width)->capture_default_str();
    sp_cmd->add_option("--seed", sp.seed)->capture_default_str();
    add_filter_flags(sp_cmd, sp.filter);
    sp_cmd->add_option("--out", sp.out, "spectrum CSV")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error[usage]: " << e.what() << "\n";
        return 2;
    }

    const Execution mode = serial ? Execution::serial : Execution::parallel;
    try {
        if (*synth_cmd) run_synth(synth, out);
        else if (*fit_cmd) run_fit(fit_args, mode, out);
        else if (*rec_cmd) run_reconstruct(rec, mode, out);
        else if (*cmp_cmd) run_compare(cmp, mode, out);
        else if (*ks_cmd) run_kstest(ks, mode, out);
        else if (*sp_cmd) run_spectrum(sp, mode, out);
    } catch (const Error& e) {
        err << "error[" << e.category() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error[internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace igo::cli
