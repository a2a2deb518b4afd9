// Microbenchmarks for the pixel kernels and detector stages, run on
// synthetic scenes at the typical clinical frame size (512x384).
#include <benchmark/benchmark.h>

#include "sonoscrub/artifacts.hpp"
#include "sonoscrub/cropper.hpp"
#include "sonoscrub/filters.hpp"
#include "sonoscrub/imgops.hpp"
#include "sonoscrub/ocr.hpp"
#include "sonoscrub/pipeline.hpp"
#include "sonoscrub/synthgen.hpp"
#include "sonoscrub/textkx.hpp"

namespace {

using namespace sonoscrub;

// One busy scene reused across kernel benchmarks: doppler color forces three
// channels, the caliper and text give the detectors real work.
const Scene& busy_scene() {
    static const Scene scene = [] {
        SceneSpec spec;
        spec.seed = 4242;
        FeatureSpec doppler;
        doppler.kind = FeatureKind::DOPPLER_PATCH;
        doppler.x = 180;
        doppler.y = 140;
        doppler.w = 90;
        doppler.h = 70;
        FeatureSpec cross;
        cross.kind = FeatureKind::CALIPER_CROSS;
        cross.x = 320;
        cross.y = 220;
        cross.size = 23;
        FeatureSpec label;
        label.kind = FeatureKind::TEXT_LABEL;
        label.text = "RT BREAST 10:30 2.1 CM";
        label.x = 20;
        label.y = 8;
        spec.features = {doppler, cross, label};
        return render(spec);
    }();
    return scene;
}

const ScanImage& busy_gray() {
    static const ScanImage gray = to_grayscale(busy_scene().image);
    return gray;
}

const BinaryMask& busy_edges() {
    static const BinaryMask edges = canny_edges(busy_gray(), 50, 150);
    return edges;
}

void bm_to_grayscale(benchmark::State& state) {
    const ScanImage& img = busy_scene().image;
    for (auto _ : state) benchmark::DoNotOptimize(to_grayscale(img));
}
BENCHMARK(bm_to_grayscale);

void bm_hsv_mask(benchmark::State& state) {
    const ScanImage& img = busy_scene().image;
    const auto ranges = default_doppler_ranges();
    for (auto _ : state) benchmark::DoNotOptimize(hsv_mask(img, ranges));
}
BENCHMARK(bm_hsv_mask);

void bm_dilate(benchmark::State& state) {
    const BinaryMask& edges = busy_edges();
    const int radius = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(dilate(edges, radius));
}
BENCHMARK(bm_dilate)->Arg(1)->Arg(2);

void bm_connected_components(benchmark::State& state) {
    const BinaryMask& edges = busy_edges();
    for (auto _ : state) benchmark::DoNotOptimize(connected_components(edges));
}
BENCHMARK(bm_connected_components);

void bm_find_contours(benchmark::State& state) {
    const BinaryMask& edges = busy_edges();
    for (auto _ : state) benchmark::DoNotOptimize(find_contours(edges));
}
BENCHMARK(bm_find_contours);

void bm_canny(benchmark::State& state) {
    const ScanImage& gray = busy_gray();
    for (auto _ : state) benchmark::DoNotOptimize(canny_edges(gray, 50, 150));
}
BENCHMARK(bm_canny);

void bm_hough(benchmark::State& state) {
    const BinaryMask& edges = busy_edges();
    for (auto _ : state) benchmark::DoNotOptimize(hough_lines(edges, 30, 25, 3));
}
BENCHMARK(bm_hough);

void bm_edge_enhance(benchmark::State& state) {
    const ScanImage& gray = busy_gray();
    for (auto _ : state) benchmark::DoNotOptimize(edge_enhance(gray));
}
BENCHMARK(bm_edge_enhance);

void bm_crop_scan(benchmark::State& state) {
    const ScanImage& img = busy_scene().image;
    for (auto _ : state) benchmark::DoNotOptimize(crop_scan(img, {}));
}
BENCHMARK(bm_crop_scan);

void bm_detect_invalid(benchmark::State& state) {
    const ScanImage& img = busy_scene().image;
    for (auto _ : state) benchmark::DoNotOptimize(detect_invalid(img, {}));
}
BENCHMARK(bm_detect_invalid);

void bm_detect_non_b_mode(benchmark::State& state) {
    const ScanImage& img = busy_scene().image;
    for (auto _ : state) benchmark::DoNotOptimize(detect_non_b_mode(img, {}));
}
BENCHMARK(bm_detect_non_b_mode);

void bm_detect_calipers(benchmark::State& state) {
    const ScanImage& img = busy_scene().image;
    CaliperConfig cfg;
    cfg.method = state.range(0) ? CaliperMethod::CONTOUR_PLUS_HOUGH
                                : CaliperMethod::CONTOUR;
    for (auto _ : state) benchmark::DoNotOptimize(detect_calipers(img, cfg));
}
BENCHMARK(bm_detect_calipers)->Arg(0)->Arg(1);

void bm_detect_dual_view(benchmark::State& state) {
    const ScanImage& img = busy_scene().image;
    for (auto _ : state) benchmark::DoNotOptimize(detect_dual_view(img, {}));
}
BENCHMARK(bm_detect_dual_view);

void bm_analyze_scan(benchmark::State& state) {
    const ScanImage& img = busy_scene().image;
    const bool with_ocr = state.range(0) != 0;
    PipelineConfig cfg;
    cfg.stages.textkx = with_ocr;
    Grammar grammar(cfg.textkx);
    std::unique_ptr<OcrBackend> ocr;
    if (with_ocr) ocr = make_backend(cfg.textkx.backend);
    for (auto _ : state)
        benchmark::DoNotOptimize(analyze_scan(img, cfg, ocr.get(), grammar));
}
BENCHMARK(bm_analyze_scan)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
