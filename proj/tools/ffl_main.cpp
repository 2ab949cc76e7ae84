// ffl: frequency-domain loss and metrics toolbox.
//
// Exit codes: 0 success, 2 I/O error, 3 config/validation error,
// 4 numerical divergence.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffl/filters.hpp"
#include "ffl/io.hpp"
#include "ffl/loss.hpp"
#include "ffl/metrics.hpp"
#include "ffl/spectral.hpp"
#include "ffl/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

ordered_json finite_or_null(const std::vector<double>& vs) {
    ordered_json arr = ordered_json::array();
    for (double v : vs) arr.push_back(finite_or_null(v));
    return arr;
}

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("FFL_SEED");
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0') {
        throw std::invalid_argument("FFL_SEED must be an unsigned integer, got '" +
                                    std::string(raw) + "'");
    }
    return static_cast<std::uint64_t>(v);
}

ffl::TransformKind parse_transform(const std::string& s) {
    if (s == "dft") return ffl::TransformKind::dft;
    if (s == "dct") return ffl::TransformKind::dct;
    throw std::invalid_argument("transform must be dft or dct, got '" + s + "'");
}

ffl::DistanceKind parse_distance(const std::string& s) {
    if (s == "full") return ffl::DistanceKind::full;
    if (s == "amplitude") return ffl::DistanceKind::amplitude_only;
    if (s == "phase") return ffl::DistanceKind::phase_only;
    if (s == "spatial") return ffl::DistanceKind::spatial;
    throw std::invalid_argument(
        "distance must be full, amplitude, phase or spatial, got '" + s + "'");
}

ffl::CorpusKind parse_corpus_kind(const std::string& s) {
    if (s == "gratings") return ffl::CorpusKind::gratings;
    if (s == "checkerboards") return ffl::CorpusKind::checkerboards;
    if (s == "filtered_noise") return ffl::CorpusKind::filtered_noise;
    if (s == "blobs") return ffl::CorpusKind::blobs;
    throw std::invalid_argument(
        "corpus kind must be gratings, checkerboards, filtered_noise or blobs, got '" +
        s + "'");
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    if (files.empty()) {
        throw ffl::IoError(dir.string() + ": no .pgm or .ppm files");
    }
    return files;
}

// ---------------------------------------------------------------- eval ----

struct EvalFlags {
    std::string real_path;
    std::string fake_path;
    std::string csv_path;
    double alpha = 1.0;
    int patch_factor = 1;
    std::string transform = "dft";
    std::string distance = "full";
    bool no_focal = false;
    bool ave_spectrum = false;
};

struct PairRow {
    std::string real_name;
    std::string fake_name;
    double ffl = 0.0;
    ffl::MetricReport metrics;
};

PairRow eval_pair(const fs::path& real_path, const fs::path& fake_path,
                  const ffl::LossConfig& cfg) {
    const ffl::ImageTensor real = ffl::read_image(real_path.string());
    const ffl::ImageTensor fake = ffl::read_image(fake_path.string());
    if (!real.same_shape(fake)) {
        throw ffl::IoError("shape mismatch: " + real_path.string() + " vs " +
                           fake_path.string());
    }
    PairRow row;
    row.real_name = real_path.string();
    row.fake_name = fake_path.string();
    if (real.height >= 11 && real.width >= 11) {
        row.metrics = ffl::evaluate_metrics(real, fake);
    } else {
        // ssim needs an 11x11 window; report it as undefined for tiny images
        row.metrics.lfd_per_channel = ffl::lfd_per_channel(real, fake);
        row.metrics.psnr_per_channel = ffl::psnr_per_channel(real, fake);
        row.metrics.lfd = ffl::lfd(real, fake);
        row.metrics.psnr = ffl::psnr(real, fake);
        row.metrics.ssim = std::numeric_limits<double>::quiet_NaN();
    }
    // The loss is scale-sensitive; it is computed on pixels mapped to [0,1].
    row.ffl = ffl::ffl_forward(ffl::affine(real, 1.0 / 255.0, 0.0),
                               ffl::affine(fake, 1.0 / 255.0, 0.0), cfg);
    return row;
}

ordered_json row_json(const PairRow& row) {
    ordered_json j;
    j["real"] = row.real_name;
    j["fake"] = row.fake_name;
    j["ffl"] = row.ffl;
    j["lfd"] = row.metrics.lfd;
    j["psnr"] = finite_or_null(row.metrics.psnr);
    j["ssim"] = finite_or_null(row.metrics.ssim);
    j["lfd_per_channel"] = row.metrics.lfd_per_channel;
    j["psnr_per_channel"] = finite_or_null(row.metrics.psnr_per_channel);
    j["ssim_per_channel"] = row.metrics.ssim_per_channel;
    return j;
}

int cmd_eval(const EvalFlags& flags) {
    ffl::LossConfig cfg;
    cfg.alpha = flags.alpha;
    cfg.patch_factor = flags.patch_factor;
    cfg.transform = parse_transform(flags.transform);
    cfg.distance = parse_distance(flags.distance);
    cfg.focal = !flags.no_focal;
    cfg.batch_reduction = flags.ave_spectrum ? ffl::BatchReduction::average_spectrum
                                             : ffl::BatchReduction::mean_per_image;

    const bool real_dir = fs::is_directory(flags.real_path);
    const bool fake_dir = fs::is_directory(flags.fake_path);
    if (real_dir != fake_dir) {
        throw ffl::IoError("inputs must both be files or both be directories");
    }

    std::vector<std::pair<fs::path, fs::path>> pairs;
    if (real_dir) {
        const std::vector<fs::path> reals = list_images(flags.real_path);
        const std::vector<fs::path> fakes = list_images(flags.fake_path);
        if (reals.size() != fakes.size()) {
            throw ffl::IoError("directories hold " + std::to_string(reals.size()) +
                               " vs " + std::to_string(fakes.size()) +
                               " images; counts must match");
        }
        for (std::size_t i = 0; i < reals.size(); ++i) pairs.emplace_back(reals[i], fakes[i]);
    } else {
        pairs.emplace_back(flags.real_path, flags.fake_path);
    }

    std::vector<PairRow> rows;
    rows.reserve(pairs.size());
    for (const auto& [rp, fp] : pairs) rows.push_back(eval_pair(rp, fp, cfg));

    PairRow mean;
    mean.real_name = "mean";
    mean.fake_name = "mean";
    const auto add_into = [](std::vector<double>& dst, const std::vector<double>& src) {
        if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
        for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
    };
    for (const PairRow& row : rows) {
        mean.ffl += row.ffl;
        mean.metrics.lfd += row.metrics.lfd;
        mean.metrics.psnr += row.metrics.psnr;
        mean.metrics.ssim += row.metrics.ssim;
        add_into(mean.metrics.lfd_per_channel, row.metrics.lfd_per_channel);
        add_into(mean.metrics.psnr_per_channel, row.metrics.psnr_per_channel);
        add_into(mean.metrics.ssim_per_channel, row.metrics.ssim_per_channel);
    }
    const double inv = 1.0 / static_cast<double>(rows.size());
    mean.ffl *= inv;
    mean.metrics.lfd *= inv;
    mean.metrics.psnr *= inv;
    mean.metrics.ssim *= inv;
    for (std::vector<double>* vec : {&mean.metrics.lfd_per_channel,
                                     &mean.metrics.psnr_per_channel,
                                     &mean.metrics.ssim_per_channel}) {
        for (double& v : *vec) v *= inv;
    }

    // With --ave-spectrum the aggregate loss weighs batch-averaged
    // representations instead of averaging per-pair losses.
    if (flags.ave_spectrum && pairs.size() > 1) {
        std::vector<ffl::ImageTensor> reals, fakes;
        for (const auto& [rp, fp] : pairs) {
            reals.push_back(ffl::affine(ffl::read_image(rp.string()), 1.0 / 255.0, 0.0));
            fakes.push_back(ffl::affine(ffl::read_image(fp.string()), 1.0 / 255.0, 0.0));
        }
        mean.ffl = ffl::batch_ffl(reals, fakes, cfg).value;
    }

    ordered_json out;
    out["pairs"] = ordered_json::array();
    for (const PairRow& row : rows) out["pairs"].push_back(row_json(row));
    out["mean"] = row_json(mean);
    out["mean"].erase("real");
    out["mean"].erase("fake");
    std::cout << out.dump(2) << "\n";

    if (!flags.csv_path.empty()) {
        std::ofstream csv(flags.csv_path);
        if (!csv) throw ffl::IoError(flags.csv_path + ": cannot open for writing");
        csv << "real,fake,ffl,lfd,psnr,ssim\n";
        for (const PairRow& row : rows) {
            csv << row.real_name << "," << row.fake_name << "," << format_value(row.ffl)
                << "," << format_value(row.metrics.lfd) << ","
                << format_value(row.metrics.psnr) << "," << format_value(row.metrics.ssim)
                << "\n";
        }
        csv << "mean,mean," << format_value(mean.ffl) << ","
            << format_value(mean.metrics.lfd) << "," << format_value(mean.metrics.psnr)
            << "," << format_value(mean.metrics.ssim) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------ spectrum ----

struct SpectrumFlags {
    std::string input;
    std::string out;
    std::string view;
    bool average = false;
    bool no_orthonormalize = false;
};

int cmd_spectrum(const SpectrumFlags& flags) {
    const bool ortho = !flags.no_orthonormalize;
    ffl::Spectrum spec;
    if (flags.average) {
        if (!fs::is_directory(flags.input)) {
            throw ffl::IoError(flags.input + ": --average needs a directory");
        }
        const std::vector<fs::path> files = list_images(flags.input);
        bool first = true;
        for (const fs::path& f : files) {
            const ffl::Spectrum s = ffl::dft2(ffl::read_image(f.string()), ortho);
            if (first) {
                spec = s;
                first = false;
            } else {
                if (!spec.same_shape(s)) {
                    throw ffl::IoError(f.string() + ": shape differs from the first image");
                }
                for (std::size_t i = 0; i < spec.values.size(); ++i) {
                    spec.values[i] += s.values[i];
                }
            }
        }
        const double inv = 1.0 / static_cast<double>(files.size());
        for (auto& z : spec.values) z *= inv;
    } else {
        spec = ffl::dft2(ffl::read_image(flags.input), ortho);
    }
    ffl::write_spectrum_file(flags.out, spec);
    if (!flags.view.empty()) {
        const ffl::ImageTensor view = ffl::log_amplitude_view(spec);
        ffl::write_image(flags.view, ffl::affine(view, 255.0, 0.0));
    }
    return 0;
}

// -------------------------------------------------------------- filter ----

struct FilterFlags {
    std::string input;
    std::string out;
    std::string kind = "lowpass";
    double radius = -1.0;
    double inner = -1.0;
    double outer = -1.0;
};

int cmd_filter(const FilterFlags& flags) {
    const ffl::ImageTensor image = ffl::read_image(flags.input);
    const int h = image.height, w = image.width;
    const double base = std::min(h, w);
    ffl::SpectralMask mask;
    if (flags.kind == "lowpass") {
        mask = ffl::make_lowpass(h, w, flags.radius >= 0 ? flags.radius : base / 8.0);
    } else if (flags.kind == "highpass") {
        mask = ffl::make_highpass(h, w, flags.radius >= 0 ? flags.radius : base / 8.0);
    } else if (flags.kind == "bandstop") {
        mask = ffl::make_bandstop(h, w, flags.inner >= 0 ? flags.inner : base / 8.0,
                                  flags.outer >= 0 ? flags.outer : base / 4.0);
    } else if (flags.kind == "notch-dc") {
        mask = ffl::make_notch(h, w, {{h / 2, w / 2}});
    } else {
        throw std::invalid_argument(
            "filter kind must be lowpass, highpass, bandstop or notch-dc, got '" +
            flags.kind + "'");
    }

    const ffl::ImageTensor filtered = ffl::apply_filter(image, mask);
    ffl::write_image(flags.out, filtered);

    const std::string ext = image.channels == 3 ? ".ppm" : ".pgm";
    const fs::path out_path(flags.out);
    const fs::path dir = out_path.parent_path();
    const std::string stem = out_path.stem().string();
    const auto view_path = [&](const char* suffix) {
        return (dir / (stem + suffix + ext)).string();
    };
    const ffl::ImageTensor before = ffl::log_amplitude_view(ffl::dft2(image, true));
    const ffl::ImageTensor after = ffl::log_amplitude_view(ffl::dft2(filtered, true));
    ffl::write_image(view_path("_spectrum_before"), ffl::affine(before, 255.0, 0.0));
    ffl::write_image(view_path("_spectrum_after"), ffl::affine(after, 255.0, 0.0));
    return 0;
}

// --------------------------------------------------------------- recon ----

struct ReconFlags {
    std::string target;
    std::string out_dir;
    std::string distance = "full";
    int steps = 2000;
    double lr = 0.01;
    std::uint64_t seed = 0;
    int snapshot_every = 0;
    std::string optimizer = "adam";
};

int cmd_recon(const ReconFlags& flags) {
    const ffl::ImageTensor target255 = ffl::read_image(flags.target);
    const ffl::ImageTensor target = ffl::affine(target255, 2.0 / 255.0, -1.0);

    ffl::ReconOptions opts;
    opts.distance = parse_distance(flags.distance);
    if (opts.distance == ffl::DistanceKind::spatial) {
        throw std::invalid_argument("recon distance must be full, amplitude or phase");
    }
    opts.steps = flags.steps;
    opts.lr = flags.lr;
    opts.seed = env_seed().value_or(flags.seed);
    if (flags.optimizer == "adam") {
        opts.optimizer = ffl::Optimizer::adam;
    } else if (flags.optimizer == "gd") {
        opts.optimizer = ffl::Optimizer::gradient_descent;
    } else {
        throw std::invalid_argument("optimizer must be adam or gd, got '" +
                                    flags.optimizer + "'");
    }

    fs::create_directories(flags.out_dir);
    const fs::path out_dir(flags.out_dir);
    const std::string ext = target.channels == 3 ? ".ppm" : ".pgm";

    const auto to_pixels = [](const ffl::ImageTensor& img) {
        return ffl::affine(img, 127.5, 127.5);
    };
    const auto on_step = [&](int step, const ffl::ImageTensor& current) {
        if (flags.snapshot_every > 0 && (step + 1) % flags.snapshot_every == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%06d", step + 1);
            ffl::write_image((out_dir / (name + ext)).string(), to_pixels(current));
        }
    };

    const ffl::ReconResult result = ffl::single_image_reconstruct(target, opts, on_step);

    ffl::write_image((out_dir / ("final" + ext)).string(), to_pixels(result.image));
    std::ofstream trace((out_dir / "trace.csv").string());
    if (!trace) throw ffl::IoError((out_dir / "trace.csv").string() + ": cannot open");
    trace << "step,loss\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        trace << i << "," << format_value(result.trace[i]) << "\n";
    }

    ordered_json summary;
    summary["distance"] = flags.distance;
    summary["steps"] = flags.steps;
    summary["initial_loss"] = result.trace.front();
    summary["final_loss"] = result.trace.back();
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// --------------------------------------------------------------- train ----

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw std::invalid_argument("config key '" + prefix + key +
                                        "' is not recognized");
        }
        (void)value;
    }
}

ffl::LossConfig parse_loss_config(const json& j) {
    reject_unknown(j,
                   {"alpha", "patch_factor", "transform", "distance", "focal",
                    "batch_reduction", "epsilon"},
                   "loss.");
    ffl::LossConfig cfg;
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.patch_factor = j.value("patch_factor", cfg.patch_factor);
    if (j.contains("transform")) cfg.transform = parse_transform(j.at("transform"));
    if (j.contains("distance")) cfg.distance = parse_distance(j.at("distance"));
    cfg.focal = j.value("focal", cfg.focal);
    if (j.contains("batch_reduction")) {
        const std::string mode = j.at("batch_reduction");
        if (mode == "mean_per_image") {
            cfg.batch_reduction = ffl::BatchReduction::mean_per_image;
        } else if (mode == "average_spectrum") {
            cfg.batch_reduction = ffl::BatchReduction::average_spectrum;
        } else {
            throw std::invalid_argument(
                "loss.batch_reduction must be mean_per_image or average_spectrum, got '" +
                mode + "'");
        }
    }
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    return cfg;
}

int cmd_train(const std::string& config_path, const std::string& out_dir) {
    std::ifstream in(config_path);
    if (!in) throw ffl::IoError(config_path + ": cannot open for reading");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(config_path + ": " + e.what());
    }
    reject_unknown(doc, {"corpus", "train", "loss"}, "");

    ffl::SyntheticCorpusSpec corpus;
    corpus.count = 200;
    corpus.size = 32;
    if (doc.contains("corpus")) {
        const json& j = doc.at("corpus");
        reject_unknown(j, {"kind", "count", "size", "seed"}, "corpus.");
        if (j.contains("kind")) corpus.kind = parse_corpus_kind(j.at("kind"));
        corpus.count = j.value("count", corpus.count);
        corpus.size = j.value("size", corpus.size);
        corpus.seed = j.value("seed", corpus.seed);
    }

    ffl::TrainConfig train;
    if (doc.contains("train")) {
        const json& j = doc.at("train");
        reject_unknown(j,
                       {"epochs", "batch_size", "seed", "ffl_weight", "learning_rate",
                        "hidden", "init_std"},
                       "train.");
        train.epochs = j.value("epochs", train.epochs);
        train.batch_size = j.value("batch_size", train.batch_size);
        train.seed = j.value("seed", train.seed);
        train.ffl_weight = j.value("ffl_weight", train.ffl_weight);
        train.learning_rate = j.value("learning_rate", train.learning_rate);
        train.hidden = j.value("hidden", train.hidden);
        train.init_std = j.value("init_std", train.init_std);
    }
    if (doc.contains("loss")) train.loss = parse_loss_config(doc.at("loss"));

    if (const std::optional<std::uint64_t> seed = env_seed()) {
        corpus.seed = *seed;
        train.seed = *seed;
    }

    const ffl::TrainResult result = ffl::train_autoencoder(corpus, train);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    ffl::ModelMeta meta;
    meta.height = corpus.size;
    meta.width = corpus.size;
    meta.channels = 1;
    ffl::write_model((dir / "model.fflm").string(), result.model, meta);

    std::ofstream trace((dir / "trace.csv").string());
    if (!trace) throw ffl::IoError((dir / "trace.csv").string() + ": cannot open");
    trace << "epoch,mse,ffl,total\n";
    for (std::size_t e = 0; e < result.trace.size(); ++e) {
        trace << e << "," << format_value(result.trace[e].mse) << ","
              << format_value(result.trace[e].ffl) << ","
              << format_value(result.trace[e].total) << "\n";
    }

    ordered_json metrics;
    metrics["heldout"] = {{"lfd", result.heldout.lfd},
                          {"psnr", finite_or_null(result.heldout.psnr)},
                          {"ssim", result.heldout.ssim}};
    metrics["corpus"] = {{"count", corpus.count}, {"size", corpus.size},
                         {"seed", corpus.seed}};
    metrics["train"] = {{"epochs", train.epochs},
                        {"batch_size", train.batch_size},
                        {"seed", train.seed},
                        {"ffl_weight", train.ffl_weight}};
    std::ofstream mfile((dir / "metrics.json").string());
    if (!mfile) throw ffl::IoError((dir / "metrics.json").string() + ": cannot open");
    mfile << metrics.dump(2) << "\n";
    std::cout << metrics.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frequency-domain loss, metrics and experiments for image pairs"};
    app.require_subcommand(1);

    EvalFlags eval_flags;
    CLI::App* eval = app.add_subcommand(
        "eval", "metrics and loss for an image pair or paired directories");
    eval->add_option("real", eval_flags.real_path, "reference image or directory")
        ->required();
    eval->add_option("fake", eval_flags.fake_path, "reconstructed image or directory")
        ->required();
    eval->add_option("--alpha", eval_flags.alpha, "weight exponent (default 1)");
    eval->add_option("--patch-factor", eval_flags.patch_factor,
                     "crops per edge (default 1)");
    eval->add_option("--transform", eval_flags.transform, "dft or dct");
    eval->add_option("--distance", eval_flags.distance,
                     "full, amplitude, phase or spatial");
    eval->add_flag("--no-focal", eval_flags.no_focal, "uniform weights");
    eval->add_flag("--ave-spectrum", eval_flags.ave_spectrum,
                   "aggregate loss on batch-averaged representations");
    eval->add_option("--csv", eval_flags.csv_path, "also write rows to this CSV file");

    SpectrumFlags spectrum_flags;
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "write a spectrum container and optional view");
    spectrum->add_option("input", spectrum_flags.input, "image file (or directory with --average)")
        ->required();
    spectrum->add_option("-o,--out", spectrum_flags.out, "output .ffls path")->required();
    spectrum->add_option("--view", spectrum_flags.view,
                         "also write a log-amplitude view image here");
    spectrum->add_flag("--average", spectrum_flags.average,
                       "average the spectra of every image in the input directory");
    spectrum->add_flag("--no-orthonormalize", spectrum_flags.no_orthonormalize,
                       "store raw transform values");

    FilterFlags filter_flags;
    CLI::App* filter = app.add_subcommand("filter", "band-limit an image's spectrum");
    filter->add_option("input", filter_flags.input, "image file")->required();
    filter->add_option("-o,--out", filter_flags.out, "filtered image path")->required();
    filter->add_option("--kind", filter_flags.kind,
                       "lowpass, highpass, bandstop or notch-dc");
    filter->add_option("--radius", filter_flags.radius,
                       "pass/stop radius (default min(H,W)/8)");
    filter->add_option("--inner", filter_flags.inner,
                       "bandstop inner radius (default min(H,W)/8)");
    filter->add_option("--outer", filter_flags.outer,
                       "bandstop outer radius (default min(H,W)/4)");

    ReconFlags recon_flags;
    CLI::App* recon = app.add_subcommand(
        "recon", "gradient-descend a frequency distance from noise to a target");
    recon->add_option("target", recon_flags.target, "target image")->required();
    recon->add_option("-o,--out", recon_flags.out_dir, "output directory")->required();
    recon->add_option("--distance", recon_flags.distance, "full, amplitude or phase");
    recon->add_option("--steps", recon_flags.steps, "update steps (default 2000)");
    recon->add_option("--lr", recon_flags.lr, "learning rate (default 0.01)");
    recon->add_option("--seed", recon_flags.seed,
                      "init seed (default 0; FFL_SEED overrides)");
    recon->add_option("--snapshot-every", recon_flags.snapshot_every,
                      "write an intermediate image every K steps");
    recon->add_option("--optimizer", recon_flags.optimizer, "adam or gd");

    std::string train_config, train_out;
    CLI::App* train =
        app.add_subcommand("train", "train the MLP autoencoder from a JSON config");
    train->add_option("config", train_config, "JSON experiment config")->required();
    train->add_option("-o,--out", train_out, "output directory")->required();

    try {
        app.parse(argc, argv);
        if (eval->parsed()) return cmd_eval(eval_flags);
        if (spectrum->parsed()) return cmd_spectrum(spectrum_flags);
        if (filter->parsed()) return cmd_filter(filter_flags);
        if (recon->parsed()) return cmd_recon(recon_flags);
        if (train->parsed()) return cmd_train(train_config, train_out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    } catch (const ffl::DivergenceError& e) {
        std::cerr << "diverged: " << e.what() << "\n";
        return 4;
    } catch (const ffl::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
