// Command-line front end for the segmentation engine. Talks to the engine
// exclusively through the public C API.

#include "dge.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct MatrixDeleter {
    void operator()(dge_matrix* m) const { dge_matrix_free(m); }
};
struct ParamsDeleter {
    void operator()(dge_params* p) const { dge_params_free(p); }
};
struct ListDeleter {
    void operator()(dge_index_list* l) const { dge_index_list_free(l); }
};
struct SegmentationDeleter {
    void operator()(dge_segmentation* s) const { dge_segmentation_free(s); }
};

using MatrixPtr = std::unique_ptr<dge_matrix, MatrixDeleter>;
using ParamsPtr = std::unique_ptr<dge_params, ParamsDeleter>;
using ListPtr = std::unique_ptr<dge_index_list, ListDeleter>;
using SegmentationPtr = std::unique_ptr<dge_segmentation, SegmentationDeleter>;

void check(dge_status status) {
    if (status != DGE_OK) {
        std::fprintf(stderr, "error: %s\n", dge_last_error());
        std::exit(1);
    }
}

MatrixPtr load_matrix(const std::string& path) {
    dge_matrix* raw = nullptr;
    check(dge_matrix_load(path.c_str(), &raw));
    return MatrixPtr(raw);
}

ListPtr load_boundary_list(const std::string& path) {
    dge_index_list* raw = nullptr;
    check(dge_boundaries_load(path.c_str(), &raw));
    return ListPtr(raw);
}

ListPtr load_label_list(const std::string& path) {
    dge_index_list* raw = nullptr;
    check(dge_labels_load(path.c_str(), &raw));
    return ListPtr(raw);
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void print_prf_header() {
    std::printf("%3s  %9s  %9s  %9s  %7s\n", "tau", "precision", "recall", "f_score", "matched");
}

void print_prf_row(int64_t tolerance, const dge_index_list* pred, const dge_index_list* gt) {
    double precision = 0.0, recall = 0.0, f = 0.0;
    int64_t matched = 0;
    check(dge_eval_prf(pred, gt, tolerance, &precision, &recall, &f, &matched));
    std::printf("%3lld  %9.4f  %9.4f  %9.4f  %7lld\n", static_cast<long long>(tolerance), precision,
                recall, f, static_cast<long long>(matched));
}

struct SegmentArgs {
    std::string features_path;
    std::string out_boundaries;
    std::string gt_path;
    std::string diagnostics_path;
    std::string heatmap_path;
    double heatmap_threshold = 0.7;
    int threads = 0;
    bool skip_preprocess = false;
    bool timings = false;

    struct Hyper {
        const char* flag;
        const char* key;
        const char* help;
        double value = 0.0;
        CLI::Option* option = nullptr;
    };
    std::vector<Hyper> hypers = {
        {"--M", "M", "Patch half-width of the self-similarity distance"},
        {"--L", "L", "Search half-width of the denoiser"},
        {"--h", "h", "Nonlocal weight decay"},
        {"--lhat", "lhat", "Affinity decay in feature space"},
        {"--ltilde", "ltilde", "Affinity decay in embedding space (default 0.02*d)"},
        {"--d", "d", "Embedding dimension"},
        {"--K", "K", "Core loop iterations"},
        {"--alpha", "alpha", "Weight of the feature-space fit term"},
        {"--p", "p", "Edge-averaging kernel size (odd)"},
        {"--eta", "eta", "Temporal shrink factor"},
        {"--mu", "mu", "Semantic shrink factor"},
        {"--nc", "nc", "Number of semantic communities"},
        {"--gd-iters", "gd_iters", "Gradient-descent steps per embedding update"},
        {"--window", "window", "Detector context window"},
        {"--z", "z", "Detector threshold factor (mean + z*std)"},
        {"--min-sep", "min_sep", "Minimum frame gap between boundaries"},
        {"--seed", "seed", "Random seed"},
    };
};

void register_segment(CLI::App& app, SegmentArgs& args) {
    CLI::App* cmd = app.add_subcommand("segment", "Learn an embedding and detect event boundaries");
    cmd->add_option("--features", args.features_path, "Input feature matrix (CSV or DGEF binary)")
        ->required();
    cmd->add_option("--out-boundaries", args.out_boundaries, "Output boundary list")->required();
    cmd->add_option("--gt", args.gt_path, "Ground-truth boundary list (enables metrics)");
    cmd->add_option("--diagnostics", args.diagnostics_path, "Write run diagnostics (JSON)");
    cmd->add_option("--heatmap", args.heatmap_path, "Write the learnt graph as a PGM heatmap");
    cmd->add_option("--heatmap-threshold", args.heatmap_threshold,
                    "Blank edges below this fraction of the strongest edge")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--skip-preprocess", args.skip_preprocess,
                  "Feed the features to the core loop untouched (requires d == feature dim)");
    cmd->add_flag("--timings", args.timings, "Include wall-clock stage timings in the diagnostics");
    cmd->add_option("--threads", args.threads, "Worker threads (0 = all cores)");
    for (auto& hyper : args.hypers)
        hyper.option = cmd->add_option(hyper.flag, hyper.value, hyper.help);
}

int run_segment(const SegmentArgs& args) {
    dge_set_thread_count(args.threads);

    dge_params* params_raw = nullptr;
    check(dge_params_create(&params_raw));
    ParamsPtr params(params_raw);

    bool ltilde_given = false;
    for (const auto& hyper : args.hypers) {
        if (hyper.option == nullptr || hyper.option->count() == 0) continue;
        check(dge_params_set(params.get(), hyper.key, hyper.value));
        if (std::string(hyper.key) == "ltilde") ltilde_given = true;
    }
    if (!ltilde_given) {
        double dim = 0.0;
        check(dge_params_get(params.get(), "d", &dim));
        check(dge_params_set(params.get(), "ltilde", 0.02 * dim));
    }

    MatrixPtr features = load_matrix(args.features_path);

    dge_segmentation* seg_raw = nullptr;
    check(dge_segment(features.get(), params.get(), args.skip_preprocess ? 1 : 0, &seg_raw));
    SegmentationPtr segmentation(seg_raw);

    dge_index_list* boundaries_raw = nullptr;
    check(dge_segmentation_boundaries(segmentation.get(), &boundaries_raw));
    ListPtr boundaries(boundaries_raw);
    check(dge_index_list_save(boundaries.get(), args.out_boundaries.c_str()));
    std::printf("frames: %lld\nboundaries: %lld -> %s\n",
                static_cast<long long>(dge_matrix_rows(features.get())),
                static_cast<long long>(dge_index_list_count(boundaries.get())),
                args.out_boundaries.c_str());

    ListPtr gt;
    if (!args.gt_path.empty()) {
        gt = load_boundary_list(args.gt_path);
        print_prf_header();
        for (int64_t tolerance = 1; tolerance <= 5; ++tolerance)
            print_prf_row(tolerance, boundaries.get(), gt.get());
    }

    if (!args.diagnostics_path.empty())
        check(dge_segmentation_write_diagnostics(segmentation.get(), args.diagnostics_path.c_str(),
                                                 gt.get(), args.timings ? 1 : 0));
    if (!args.heatmap_path.empty())
        check(dge_segmentation_write_heatmap(segmentation.get(), args.heatmap_path.c_str(),
                                             args.heatmap_threshold));
    return 0;
}

struct SynthArgs {
    std::string out_features;
    std::string out_gt;
    std::string out_labels;
    int64_t n_frames = 350;
    double sigma = 3.7;
    double hazard = 0.04;
    std::uint64_t seed = 0;
};

void register_synth(CLI::App& app, SynthArgs& args) {
    CLI::App* cmd = app.add_subcommand("synth", "Generate a Markov-switching Gaussian sequence");
    cmd->add_option("--out-features", args.out_features,
                    "Output feature file (.csv writes CSV, else DGEF binary)")
        ->required();
    cmd->add_option("--out-gt", args.out_gt, "Output ground-truth boundary list")->required();
    cmd->add_option("--out-labels", args.out_labels, "Output ground-truth state labels");
    cmd->add_option("--n", args.n_frames, "Number of frames");
    cmd->add_option("--sigma", args.sigma, "Per-state standard deviation");
    cmd->add_option("--lambda", args.hazard, "Hazard rate of the switching model");
    cmd->add_option("--seed", args.seed, "Random seed");
}

int run_synth(const SynthArgs& args) {
    dge_matrix* features_raw = nullptr;
    dge_index_list* boundaries_raw = nullptr;
    dge_index_list* labels_raw = nullptr;
    check(dge_synth(args.n_frames, args.sigma, args.hazard, args.seed, &features_raw,
                    &boundaries_raw, args.out_labels.empty() ? nullptr : &labels_raw));
    MatrixPtr features(features_raw);
    ListPtr boundaries(boundaries_raw);
    ListPtr labels(labels_raw);

    if (has_suffix(args.out_features, ".csv")) {
        check(dge_matrix_save_csv(features.get(), args.out_features.c_str()));
    } else {
        check(dge_matrix_save_binary(features.get(), args.out_features.c_str()));
    }
    check(dge_index_list_save(boundaries.get(), args.out_gt.c_str()));
    if (!args.out_labels.empty()) check(dge_index_list_save(labels.get(), args.out_labels.c_str()));

    std::printf("frames: %lld\nsegments: %lld\n", static_cast<long long>(args.n_frames),
                static_cast<long long>(dge_index_list_count(boundaries.get()) + 1));
    return 0;
}

struct EvalArgs {
    std::string pred_path;
    std::string gt_path;
    std::vector<int64_t> tolerances = {1, 2, 3, 4, 5};
};

void register_eval(CLI::App& app, EvalArgs& args) {
    CLI::App* cmd = app.add_subcommand("eval", "Score predicted boundaries against ground truth");
    cmd->add_option("--pred", args.pred_path, "Predicted boundary list")->required();
    cmd->add_option("--gt", args.gt_path, "Ground-truth boundary list")->required();
    cmd->add_option("--tolerances", args.tolerances, "Tolerances to report")->delimiter(',');
}

int run_eval(const EvalArgs& args) {
    ListPtr pred = load_boundary_list(args.pred_path);
    ListPtr gt = load_boundary_list(args.gt_path);
    print_prf_header();
    for (const int64_t tolerance : args.tolerances) print_prf_row(tolerance, pred.get(), gt.get());
    return 0;
}

struct EvalClustersArgs {
    std::string pred_path;
    std::string gt_path;
};

void register_eval_clusters(CLI::App& app, EvalClustersArgs& args) {
    CLI::App* cmd = app.add_subcommand("eval-clusters", "Score a labeling against ground truth");
    cmd->add_option("--pred", args.pred_path, "Predicted label file (one integer per line)")
        ->required();
    cmd->add_option("--gt", args.gt_path, "Ground-truth label file")->required();
}

int run_eval_clusters(const EvalClustersArgs& args) {
    ListPtr pred = load_label_list(args.pred_path);
    ListPtr gt = load_label_list(args.gt_path);
    double acc = 0.0, mutual = 0.0;
    check(dge_eval_clusters(pred.get(), gt.get(), &acc, &mutual));
    std::printf("ACC %.6f\nNMI %.6f\n", acc, mutual);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training-free temporal segmentation via dynamic graph embedding"};
    app.require_subcommand(1);

    SegmentArgs segment_args;
    SynthArgs synth_args;
    EvalArgs eval_args;
    EvalClustersArgs eval_clusters_args;
    register_segment(app, segment_args);
    register_synth(app, synth_args);
    register_eval(app, eval_args);
    register_eval_clusters(app, eval_clusters_args);

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("segment")) return run_segment(segment_args);
    if (app.got_subcommand("synth")) return run_synth(synth_args);
    if (app.got_subcommand("eval")) return run_eval(eval_args);
    return run_eval_clusters(eval_clusters_args);
}
