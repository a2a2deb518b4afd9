#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sonoscrub/config.hpp"
#include "sonoscrub/image_io.hpp"
#include "sonoscrub/pipeline.hpp"
#include "sonoscrub/score.hpp"
#include "sonoscrub/synthgen.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sonoscrub;

void print_summary(const RunSummary& s) {
    std::printf("processed        %lld\n", s.processed);
    std::printf("decode_errors    %lld\n", s.decode_errors);
    std::printf("ocr_skipped      %lld\n", s.ocr_skipped);
    for (const auto& [cat, n] : s.flag_counts) std::printf("flag %-12s %lld\n", cat.c_str(), n);
}

std::string metric(const std::optional<double>& v) {
    if (!v) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return buf;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& inputs,
            const std::string& manifest, int workers, const std::string& emit_crops) {
    PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    if (!inputs.empty()) cfg.io.inputs = inputs;
    if (!manifest.empty()) cfg.io.manifest_path = manifest;
    if (workers > 0) cfg.workers = workers;
    if (!emit_crops.empty()) cfg.io.crops_dir = emit_crops;
    RunSummary s = run(cfg);
    for (const auto& w : s.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    print_summary(s);
    return s.decode_errors > 0 ? 2 : 0;
}

int cmd_score(const std::string& manifest, const std::string& truth) {
    RunSummary s = score(manifest, truth);
    for (const auto& w : s.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("matched %lld\n", s.processed);
    std::printf("%-13s %6s %6s %6s %6s  %-11s %-11s\n", "category", "tp", "fp", "tn", "fn",
                "sensitivity", "specificity");
    for (const auto& cat : score_categories()) {
        const ConfusionCells& c = s.confusion.at(cat);
        std::printf("%-13s %6lld %6lld %6lld %6lld  %-11s %-11s\n", cat.c_str(), c.tp, c.fp,
                    c.tn, c.fn, metric(sensitivity(c)).c_str(), metric(specificity(c)).c_str());
    }
    return 0;
}

int cmd_gen(unsigned long long seed, int n, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream truth(fs::path(out_dir) / "truth.jsonl", std::ios::binary);
    if (!truth) throw ConfigError("cannot write to '" + out_dir + "'");
    for (int i = 0; i < n; ++i) {
        Scene scene = corpus_item(seed, i);  // prefix-stable, so stream one at a time
        std::string id = corpus_source_id(seed, i);
        save_png(scene.image, (fs::path(out_dir) / (id + ".png")).string());
        truth << truth_json_line(id, scene.truth) << '\n';
    }
    std::printf("wrote %d images and truth.jsonl to %s\n", n, out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch curation toolkit for breast-ultrasound still images"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Analyze images and write a JSONL manifest");
    std::string config_path, manifest, emit_crops;
    std::vector<std::string> inputs;
    int workers = 0;
    run_cmd->add_option("--config", config_path, "Config file (defaults apply when omitted)");
    run_cmd->add_option("--input", inputs, "Input file, directory, or glob (repeatable)");
    run_cmd->add_option("--manifest", manifest, "Output manifest path");
    run_cmd->add_option("--workers", workers, "Worker thread count");
    run_cmd->add_option("--emit-crops", emit_crops, "Directory for cropped copies");

    auto* score_cmd = app.add_subcommand("score", "Compare a manifest against ground truth");
    std::string score_manifest, score_truth;
    score_cmd->add_option("--manifest", score_manifest, "Manifest JSONL")->required();
    score_cmd->add_option("--truth", score_truth, "Ground-truth JSONL")->required();

    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic corpus with ground truth");
    unsigned long long seed = 0;
    int n = 0;
    std::string out_dir;
    gen_cmd->add_option("--seed", seed, "Corpus seed")->required();
    gen_cmd->add_option("--n", n, "Number of images")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--out", out_dir, "Output directory")->required();

    auto* defcfg_cmd =
        app.add_subcommand("default-config", "Print a config file with every default");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(config_path, inputs, manifest, workers, emit_crops);
        if (*score_cmd) return cmd_score(score_manifest, score_truth);
        if (*gen_cmd) return cmd_gen(seed, n, out_dir);
        if (*defcfg_cmd) {
            std::fputs(default_config_text().c_str(), stdout);
            return 0;
        }
    } catch (const sonoscrub::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
