#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sevseg/anchors.hpp"
#include "sevseg/assembly.hpp"
#include "sevseg/augment.hpp"
#include "sevseg/dataset.hpp"
#include "sevseg/detector.hpp"
#include "sevseg/error.hpp"
#include "sevseg/metrics.hpp"
#include "sevseg/parallel.hpp"
#include "sevseg/postprocess.hpp"
#include "sevseg/preprocess.hpp"
#include "sevseg/synth.hpp"

namespace sevseg::cli {
namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int precision = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

struct Session {
    std::ostringstream out;
    std::vector<fs::path> artifacts;

    void write(const fs::path& path, std::string_view text) {
        write_text_file(path, text);
        artifacts.push_back(path);
    }
};

// Options shared by the commands that post-process detections before use.
struct PostOptions {
    double threshold{0.0};
    double iou{0.5};
    int max_out{7};
    bool per_class{false};

    [[nodiscard]] PostprocessConfig config() const {
        PostprocessConfig c;
        c.score_threshold = threshold;
        c.iou_threshold = iou;
        c.max_outputs = max_out;
        c.mode = per_class ? NmsMode::per_class : NmsMode::class_agnostic;
        c.validate();
        return c;
    }
};

void add_post_options(CLI::App* app, PostOptions& o, bool with_threshold) {
    if (with_threshold) {
        app->add_option("--threshold", o.threshold, "Score threshold applied before NMS")
            ->check(CLI::Range(0.0, 1.0));
    }
    app->add_option("--iou", o.iou, "NMS IoU threshold")->check(CLI::Range(0.0, 1.0));
    app->add_option("--max-out", o.max_out, "Detections kept per image after NMS")
        ->check(CLI::PositiveNumber);
    app->add_flag("--per-class-nms", o.per_class, "Suppress only among boxes of the same class");
}

unsigned resolve_jobs(int jobs) { return jobs > 0 ? static_cast<unsigned>(jobs) : default_jobs(); }

ModelPreset require_preset(const std::string& name) {
    if (auto p = find_model_preset(name)) return *p;
    std::string known;
    for (const auto& p : model_presets()) {
        if (!known.empty()) known += ", ";
        known += p.name;
    }
    throw ValidationError("unknown model '" + name + "' (known: " + known + ")");
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return files;
}

// --- synth

struct SynthOptions {
    int count{0};
    std::uint64_t seed{0};
    int rows_min{1};
    int rows_max{3};
    int digits_max{3};
    double noise{0.0};
    double slant{0.0};
    double brightness{0.0};
    std::string polarity{"mixed"};
    std::string weights{"uniform"};
    int devices{4};
    fs::path out;
    int jobs{0};
};

void cmd_synth(Session& s, const SynthOptions& o) {
    CorpusSpec spec;
    spec.rows_min = o.rows_min;
    spec.rows_max = o.rows_max;
    spec.digits_per_row_max = o.digits_max;
    spec.noise_sigma = o.noise;
    spec.slant_max_deg = o.slant;
    spec.brightness_max = o.brightness;
    spec.devices = o.devices;
    if (o.polarity == "mixed") {
        spec.mixed_polarity = true;
    } else {
        spec.mixed_polarity = false;
        spec.polarity = parse_polarity(o.polarity);
    }
    if (o.weights == "reference") spec.digit_weights = CorpusSpec::reference_weights();
    const Corpus corpus = generate_corpus(o.count, spec, o.seed, resolve_jobs(o.jobs));
    write_corpus(corpus, o.out);
    for (const auto& scene : corpus.scenes) s.artifacts.push_back(o.out / scene.annotation.file);
    s.artifacts.push_back(o.out / "annotations.json");
    s.artifacts.push_back(o.out / "class_histogram.csv");
    s.out << "wrote " << corpus.scenes.size() << " scenes, " << corpus.annotations.digit_count()
          << " digits to " << o.out.string() << "\n";
}

// --- split

struct SplitOptions {
    fs::path annotations;
    std::uint64_t seed{0};
    double train_frac{0.8};
    fs::path train_out;
    fs::path test_out;
};

void cmd_split(Session& s, const SplitOptions& o) {
    const SplitResult r = split(load_annotations(o.annotations), o.train_frac, o.seed);
    s.write(o.train_out, to_json(r.train));
    s.write(o.test_out, to_json(r.test));
    s.out << "train " << r.train.images.size() << " images, " << r.train.digit_count() << " digits\n"
          << "test " << r.test.images.size() << " images, " << r.test.digit_count() << " digits\n";
}

// --- augment

struct AugmentOptions {
    fs::path annotations;
    fs::path images;
    std::string preset{"full"};
    int copies{1};
    std::uint64_t seed{0};
    fs::path out;
    int jobs{0};
};

void cmd_augment(Session& s, const AugmentOptions& o) {
    const AnnotationSet set = load_annotations(o.annotations);
    const AugmentSpec spec = augment_preset(o.preset, o.seed);
    const fs::path root = o.images.empty() ? o.annotations.parent_path() : o.images;
    if (fs::weakly_canonical(root) == fs::weakly_canonical(o.out)) {
        throw ValidationError("--out must differ from the source image directory");
    }
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec) throw IoError("cannot create " + o.out.string() + ": " + ec.message());
    const AnnotationSet result = augment_dataset(set, spec, o.copies, root, o.out, resolve_jobs(o.jobs));
    for (const auto& img : result.images) s.artifacts.push_back(o.out / img.file);
    s.write(o.out / "annotations.json", to_json(result));
    s.out << "wrote " << result.images.size() << " augmented images to " << o.out.string() << "\n";
}

// --- detect

struct DetectOptions {
    fs::path image;
    fs::path images;
    fs::path out;
    bool postprocess{false};
    PostOptions post;
    int jobs{0};
};

DetectionSet detect_files(const std::vector<fs::path>& files, unsigned jobs) {
    DetectionSet set;
    set.images.resize(files.size());
    parallel_for(files.size(), jobs, [&](std::size_t i) {
        ImageDetections d = detect(read_image(files[i]));
        d.file = files[i].filename().string();
        set.images[i] = std::move(d);
    });
    return set;
}

void cmd_detect(Session& s, const DetectOptions& o) {
    const std::vector<fs::path> files = o.images.empty() ? std::vector<fs::path>{o.image} : list_images(o.images);
    DetectionSet set = detect_files(files, resolve_jobs(o.jobs));
    if (o.postprocess) set = sevseg::postprocess(set, o.post.config());
    const std::string json = to_json(set);
    if (o.out.empty()) {
        s.out << json;
        return;
    }
    s.write(o.out, json);
    std::size_t n = 0;
    for (const auto& img : set.images) n += img.detections.size();
    s.out << "wrote " << n << " detections for " << set.images.size() << " images to " << o.out.string()
          << "\n";
}

// --- read

struct ReadOptions {
    fs::path image;
    fs::path out;
    bool json{false};
    PostOptions post;
};

void cmd_read(Session& s, const ReadOptions& o) {
    const ImageDetections raw = detect(read_image(o.image));
    const Reading reading = assemble(sevseg::postprocess(raw.detections, o.post.config()));
    const std::string body = reading.to_json() + "\n";
    if (!o.out.empty()) s.write(o.out, body);
    if (o.json) {
        s.out << body;
        return;
    }
    for (const auto& row : reading.rows) s.out << row.digits << "\n";
}

// --- evaluation commands

struct EvalInputs {
    fs::path gt;
    fs::path det;
    bool no_postprocess{false};
    PostOptions post;
    std::string model;
};

void add_eval_inputs(CLI::App* app, EvalInputs& o) {
    app->add_option("--gt", o.gt, "Ground-truth annotation file")->required();
    app->add_option("--det", o.det, "Detection file")->required();
    app->add_flag("--no-postprocess", o.no_postprocess, "Evaluate detections exactly as stored");
    add_post_options(app, o.post, false);
}

struct Loaded {
    AnnotationSet gt;
    DetectionSet det;
};

Loaded load_eval(const EvalInputs& o) {
    Loaded l{load_annotations(o.gt), load_detections(o.det)};
    // Score filtering commutes with greedy NMS and top-k, so suppressing once
    // at threshold 0 and filtering later matches post-processing per threshold.
    if (!o.no_postprocess) {
        PostOptions p = o.post;
        p.threshold = 0.0;
        l.det = postprocess(l.det, p.config());
    }
    return l;
}

double resolve_threshold(const std::optional<double>& flag, const std::string& model, double fallback) {
    if (flag) return *flag;
    if (!model.empty()) return require_preset(model).score_threshold;
    return fallback;
}

struct CocoOptionsCli {
    EvalInputs in;
    std::string recall_cap{"per-image-per-class"};
    fs::path out;
};

void cmd_eval_coco(Session& s, const CocoOptionsCli& o) {
    const Loaded l = load_eval(o.in);
    CocoOptions opts;
    opts.recall_cap = o.recall_cap == "per-image" ? RecallCap::per_image : RecallCap::per_image_per_class;
    const CocoReport r = coco_report(l.gt, l.det, opts);
    if (!o.out.empty()) s.write(o.out, r.to_json() + "\n");
    s.out << "mAP   " << fixed(r.mAP) << "\n"
          << "AP_50 " << fixed(r.AP_50) << "\n"
          << "AP_75 " << fixed(r.AP_75) << "\n"
          << "AR_1  " << fixed(r.AR_1) << "\n"
          << "AR_10 " << fixed(r.AR_10) << "\n"
          << "classes " << r.classes_evaluated << "\n";
}

struct DetOptionsCli {
    EvalInputs in;
    std::optional<double> threshold;
    double match_iou{0.5};
    bool class_sensitive{false};
    fs::path out;
};

void cmd_eval_det(Session& s, const DetOptionsCli& o) {
    const Loaded l = load_eval(o.in);
    const double t = resolve_threshold(o.threshold, o.in.model, 0.5);
    const PrfReport r = prf(l.gt, l.det, t, o.match_iou, o.class_sensitive);
    if (!o.out.empty()) s.write(o.out, r.to_json() + "\n");
    s.out << "threshold " << fixed(t, 2) << "\n"
          << "tp " << r.tp << " fp " << r.fp << " fn " << r.fn << "\n"
          << "precision " << fixed(r.precision) << "\n"
          << "recall    " << fixed(r.recall) << "\n"
          << "f1        " << fixed(r.f1) << "\n";
}

struct SweepOptionsCli {
    EvalInputs in;
    double match_iou{0.5};
    bool class_sensitive{false};
    fs::path out;
};

void cmd_sweep(Session& s, const SweepOptionsCli& o) {
    const Loaded l = load_eval(o.in);
    const SweepResult r = sweep(l.gt, l.det, default_sweep_grid(), o.match_iou, o.class_sensitive);
    const std::string csv = r.to_csv();
    if (!o.out.empty()) s.write(o.out, csv);
    s.out << csv << "optimal threshold " << fixed(r.best_threshold(), 2) << " (f1 " << fixed(r.best().f1)
          << ")\n";
}

struct ConfusionOptionsCli {
    EvalInputs in;
    std::optional<double> threshold;
    double match_iou{0.5};
    fs::path out;
};

void cmd_confusion(Session& s, const ConfusionOptionsCli& o) {
    const Loaded l = load_eval(o.in);
    const double t = resolve_threshold(o.threshold, o.in.model, 0.5);
    const ConfusionMatrix m = confusion(l.gt, l.det, t, o.match_iou);
    const std::string csv = m.to_csv();
    if (!o.out.empty()) s.write(o.out, csv);
    s.out << csv << "accuracy " << m.trace() << "/" << m.total() << " = " << fixed(m.accuracy()) << "\n";
}

// --- anchors-report

struct AnchorsOptions {
    fs::path annotations;
    std::string model;
    int input_side{0};
    std::string ratios{"extended"};
    double iou{0.5};
    int bins{10};
    fs::path out;
    int jobs{0};
};

void cmd_anchors(Session& s, const AnchorsOptions& o) {
    AnchorConfig cfg;
    if (o.input_side > 0) {
        cfg.input_side = o.input_side;
    } else if (!o.model.empty()) {
        cfg.input_side = require_preset(o.model).input_side;
    }
    if (o.ratios == "standard") cfg.aspect_ratios = AnchorConfig::standard_ratios();
    cfg.validate();
    const AnchorGrid grid = generate_anchors(cfg);
    const CoverageReport report = coverage_report(grid, load_annotations(o.annotations), o.iou, resolve_jobs(o.jobs));
    const std::string csv = coverage_csv(report, o.bins);
    if (o.out.empty()) {
        s.out << csv;
        return;
    }
    s.write(o.out, csv);
    s.out << "input " << cfg.input_side << " anchors " << grid.size() << "\n"
          << "coverage " << report.matched << "/" << report.boxes << " = " << fixed(report.coverage())
          << " at IoU " << fixed(o.iou, 2) << "\n";
}

// --- stats

struct StatsOptions {
    fs::path annotations;
    fs::path coco;
    fs::path convert_out;
    double bin_width{0.1};
    fs::path out_dir;
};

std::string class_csv(const ClassHistogram& h) {
    std::ostringstream os;
    os << "class,count\n";
    for (int c = 0; c < ClassId::kNumClasses; ++c) os << c << "," << h[static_cast<std::size_t>(c)] << "\n";
    return os.str();
}

std::string aspect_csv(const AspectHistogram& h) {
    std::ostringstream os;
    os << "bin_start,bin_end,count\n";
    for (const auto& [k, n] : h.counts) {
        os << fixed(static_cast<double>(k) * h.bin_width, 4) << "," << fixed(static_cast<double>(k + 1) * h.bin_width, 4)
           << "," << n << "\n";
    }
    return os.str();
}

void cmd_stats(Session& s, const StatsOptions& o) {
    if (o.annotations.empty() == o.coco.empty()) {
        throw ValidationError("exactly one of --annotations or --coco is required");
    }
    const AnnotationSet set = o.coco.empty() ? load_annotations(o.annotations) : import_coco(o.coco);
    if (!o.convert_out.empty()) s.write(o.convert_out, to_json(set));
    const std::string classes = class_csv(class_histogram(set));
    const std::string aspects = aspect_csv(aspect_histogram(set, o.bin_width));
    if (!o.out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(o.out_dir, ec);
        if (ec) throw IoError("cannot create " + o.out_dir.string() + ": " + ec.message());
        s.write(o.out_dir / "class_histogram.csv", classes);
        s.write(o.out_dir / "aspect_histogram.csv", aspects);
    }
    s.out << "images " << set.images.size() << " digits " << set.digit_count() << "\n\n"
          << classes << "\n"
          << aspects;
}

}  // namespace

CommandOutcome run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Seven-segment display reading and detector evaluation toolkit", "sevseg"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    SynthOptions synth_o;
    auto* synth = app.add_subcommand("synth", "Render a seeded synthetic display corpus");
    synth->add_option("--count", synth_o.count, "Number of scenes")->required()->check(CLI::NonNegativeNumber);
    synth->add_option("--seed", synth_o.seed, "Random seed")->required();
    synth->add_option("--rows-min", synth_o.rows_min, "Minimum rows per display")->check(CLI::Range(1, 3));
    synth->add_option("--rows-max", synth_o.rows_max, "Maximum rows per display")->check(CLI::Range(1, 3));
    synth->add_option("--digits-max", synth_o.digits_max, "Maximum digits per row")->check(CLI::Range(1, 7));
    synth->add_option("--noise", synth_o.noise, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
    synth->add_option("--slant", synth_o.slant, "Maximum absolute slant, degrees")->check(CLI::Range(0.0, 8.0));
    synth->add_option("--brightness", synth_o.brightness, "Maximum absolute brightness offset")
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--polarity", synth_o.polarity, "mixed, light-on-dark or dark-on-light")
        ->check(CLI::IsMember({"mixed", "light-on-dark", "dark-on-light"}));
    synth->add_option("--weights", synth_o.weights, "Digit frequencies: uniform or reference")
        ->check(CLI::IsMember({"uniform", "reference"}));
    synth->add_option("--devices", synth_o.devices, "Number of device families")->check(CLI::Range(1, 64));
    synth->add_option("--out", synth_o.out, "Output directory")->required();
    synth->add_option("--jobs", synth_o.jobs, "Worker threads (default SEVSEG_JOBS or all cores)");

    SplitOptions split_o;
    auto* split_c = app.add_subcommand("split", "Per-device train/test split");
    split_c->add_option("--annotations", split_o.annotations, "Annotation file")->required();
    split_c->add_option("--seed", split_o.seed, "Random seed")->required();
    split_c->add_option("--train-frac", split_o.train_frac, "Training fraction per device")
        ->check(CLI::Range(0.0, 1.0));
    split_c->add_option("--train-out", split_o.train_out, "Training annotation output")->required();
    split_c->add_option("--test-out", split_o.test_out, "Test annotation output")->required();

    AugmentOptions aug_o;
    auto* aug = app.add_subcommand("augment", "Write augmented copies of an annotated image set");
    aug->add_option("--annotations", aug_o.annotations, "Annotation file")->required();
    aug->add_option("--images", aug_o.images, "Image directory (default: the annotation file's directory)");
    aug->add_option("--preset", aug_o.preset, "full or lite")->check(CLI::IsMember({"full", "lite"}));
    aug->add_option("--copies", aug_o.copies, "Augmented copies per image")->check(CLI::PositiveNumber);
    aug->add_option("--seed", aug_o.seed, "Random seed")->required();
    aug->add_option("--out", aug_o.out, "Output directory")->required();
    aug->add_option("--jobs", aug_o.jobs, "Worker threads");

    DetectOptions det_o;
    auto* det = app.add_subcommand("detect", "Run the classical detector over images");
    auto* det_image = det->add_option("--image", det_o.image, "Single image");
    auto* det_images = det->add_option("--images", det_o.images, "Directory of PNG/JPEG images");
    det_image->excludes(det_images);
    det->add_option("--out", det_o.out, "Detection file (default: standard output)");
    det->add_flag("--postprocess", det_o.postprocess, "Apply score filter, NMS and top-k");
    add_post_options(det, det_o.post, true);
    det->add_option("--jobs", det_o.jobs, "Worker threads");

    ReadOptions read_o;
    auto* read = app.add_subcommand("read", "Read the rows of a display image");
    read->add_option("--image", read_o.image, "Display image")->required();
    read->add_option("--out", read_o.out, "Write the JSON reading here");
    read->add_flag("--json", read_o.json, "Print the JSON reading instead of one row per line");
    add_post_options(read, read_o.post, true);

    CocoOptionsCli coco_o;
    auto* coco = app.add_subcommand("eval-coco", "COCO-style AP and AR");
    add_eval_inputs(coco, coco_o.in);
    coco->add_option("--recall-cap", coco_o.recall_cap, "AR detection cap: per-image-per-class or per-image")
        ->check(CLI::IsMember({"per-image-per-class", "per-image"}));
    coco->add_option("--out", coco_o.out, "Write the JSON report here");

    DetOptionsCli det_eval_o;
    auto* det_eval = app.add_subcommand("eval-det", "Precision, recall and F1 at one threshold");
    add_eval_inputs(det_eval, det_eval_o.in);
    det_eval->add_option("--threshold", det_eval_o.threshold, "Score threshold (default 0.5)")
        ->check(CLI::Range(0.0, 1.0));
    det_eval->add_option("--model", det_eval_o.in.model, "Use the preset threshold of a model");
    det_eval->add_option("--match-iou", det_eval_o.match_iou, "IoU needed for a true positive")
        ->check(CLI::Range(0.0, 1.0));
    det_eval->add_flag("--class-sensitive", det_eval_o.class_sensitive, "Require matching classes");
    det_eval->add_option("--out", det_eval_o.out, "Write the JSON report here");

    SweepOptionsCli sweep_o;
    auto* sweep_c = app.add_subcommand("sweep", "Precision/recall/F1 over thresholds 0.05..0.95");
    add_eval_inputs(sweep_c, sweep_o.in);
    sweep_c->add_option("--match-iou", sweep_o.match_iou, "IoU needed for a true positive")
        ->check(CLI::Range(0.0, 1.0));
    sweep_c->add_flag("--class-sensitive", sweep_o.class_sensitive, "Require matching classes");
    sweep_c->add_option("--out", sweep_o.out, "Write the CSV here");

    ConfusionOptionsCli conf_o;
    auto* conf = app.add_subcommand("confusion", "Class confusion over true positives");
    add_eval_inputs(conf, conf_o.in);
    conf->add_option("--threshold", conf_o.threshold, "Score threshold (default 0.5)")
        ->check(CLI::Range(0.0, 1.0));
    conf->add_option("--model", conf_o.in.model, "Use the preset threshold of a model");
    conf->add_option("--match-iou", conf_o.match_iou, "IoU needed for a true positive")->check(CLI::Range(0.0, 1.0));
    conf->add_option("--out", conf_o.out, "Write the CSV here");

    AnchorsOptions anc_o;
    auto* anc = app.add_subcommand("anchors-report", "Anchor coverage of ground-truth boxes");
    anc->add_option("--annotations", anc_o.annotations, "Annotation file")->required();
    auto* anc_model = anc->add_option("--model", anc_o.model, "Model preset for the input size");
    auto* anc_side = anc->add_option("--input-size", anc_o.input_side, "Square input side")
                         ->check(CLI::PositiveNumber);
    anc_model->excludes(anc_side);
    anc->add_option("--ratios", anc_o.ratios, "extended or standard")
        ->check(CLI::IsMember({"extended", "standard"}));
    anc->add_option("--iou", anc_o.iou, "IoU for a box to count as covered")->check(CLI::Range(0.0, 1.0));
    anc->add_option("--bins", anc_o.bins, "Best-IoU histogram bins")->check(CLI::PositiveNumber);
    anc->add_option("--out", anc_o.out, "Write the CSV here");
    anc->add_option("--jobs", anc_o.jobs, "Worker threads");

    StatsOptions stats_o;
    auto* stats = app.add_subcommand("stats", "Class and aspect-ratio histograms");
    stats->add_option("--annotations", stats_o.annotations, "Annotation file");
    stats->add_option("--coco", stats_o.coco, "COCO annotation file (converted on the fly)");
    stats->add_option("--convert-out", stats_o.convert_out, "Save the converted annotations here");
    stats->add_option("--bin-width", stats_o.bin_width, "Aspect-ratio bin width")->check(CLI::PositiveNumber);
    stats->add_option("--out-dir", stats_o.out_dir, "Write class_histogram.csv and aspect_histogram.csv here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    CommandOutcome outcome;
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        outcome.report = app.help();
        out << outcome.report;
        return outcome;
    } catch (const CLI::CallForAllHelp&) {
        outcome.report = app.help("", CLI::AppFormatMode::All);
        out << outcome.report;
        return outcome;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        outcome.exit_code = kValidationError;
        return outcome;
    }

    Session session;
    try {
        if (synth->parsed()) cmd_synth(session, synth_o);
        else if (split_c->parsed()) cmd_split(session, split_o);
        else if (aug->parsed()) cmd_augment(session, aug_o);
        else if (det->parsed()) {
            if (det_o.image.empty() && det_o.images.empty()) throw ValidationError("--image or --images is required");
            cmd_detect(session, det_o);
        } else if (read->parsed()) cmd_read(session, read_o);
        else if (coco->parsed()) cmd_eval_coco(session, coco_o);
        else if (det_eval->parsed()) cmd_eval_det(session, det_eval_o);
        else if (sweep_c->parsed()) cmd_sweep(session, sweep_o);
        else if (conf->parsed()) cmd_confusion(session, conf_o);
        else if (anc->parsed()) cmd_anchors(session, anc_o);
        else if (stats->parsed()) cmd_stats(session, stats_o);
    } catch (const IoError& e) {
        outcome.exit_code = kIoError;
        err << "error: " << e.what() << "\n";
    } catch (const AugmentError& e) {
        outcome.exit_code = kIoError;
        err << "error: " << e.what() << "\n";
    } catch (const Error& e) {
        outcome.exit_code = kValidationError;
        err << "error: " << e.what() << "\n";
    }
    if (outcome.exit_code != kSuccess) return outcome;
    outcome.report = session.out.str();
    outcome.artifacts = std::move(session.artifacts);
    out << outcome.report;
    return outcome;
}

}  // namespace sevseg::cli
