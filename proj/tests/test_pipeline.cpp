#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "sonoscrub/image_io.hpp"
#include "sonoscrub/pipeline.hpp"
#include "sonoscrub/synthgen.hpp"

using namespace sonoscrub;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// 24 mixed synthetic scenes on disk plus their truth file.
std::string write_corpus(const fs::path& dir, unsigned long long seed = 11, int n = 24) {
    fs::create_directories(dir);
    std::ofstream truth(dir / "truth.jsonl");
    auto scenes = corpus(seed, n);
    for (int i = 0; i < n; ++i) {
        std::string id = corpus_source_id(seed, i);
        save_png(scenes[i].image, (dir / (id + ".png")).string());
        truth << truth_json_line(id, scenes[i].truth) << "\n";
    }
    return (dir / "*.png").string();
}

std::vector<std::string> manifest_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::vector<std::string> lines;
    std::string l;
    while (std::getline(in, l))
        if (!l.empty()) lines.push_back(l);
    return lines;
}

PipelineConfig base_config(const TempDir& tmp, const std::string& glob) {
    PipelineConfig cfg;
    cfg.io.inputs = {glob};
    cfg.io.manifest_path = (tmp.path / "manifest.jsonl").string();
    return cfg;
}

}  // namespace

TEST_CASE("resolve_inputs expands files, directories, and globs") {
    TempDir tmp("sonoscrub_inputs_test");
    auto touch = [&](const char* name) {
        std::ofstream(tmp.path / name) << "x";
    };
    touch("b.png");
    touch("a.png");
    touch("c.PNG");
    touch("notes.txt");
    touch("d.jpeg");

    SUBCASE("directory keeps image extensions only, sorted") {
        auto files = resolve_inputs({tmp.path.string()});
        REQUIRE(files.size() == 4);
        CHECK(fs::path(files[0]).filename() == "a.png");
        CHECK(fs::path(files[1]).filename() == "b.png");
        CHECK(fs::path(files[2]).filename() == "c.PNG");
        CHECK(fs::path(files[3]).filename() == "d.jpeg");
    }
    SUBCASE("glob matches the final component literally") {
        auto files = resolve_inputs({(tmp.path / "*.png").string()});
        REQUIRE(files.size() == 2);  // case-sensitive: c.PNG excluded
        CHECK(fs::path(files[0]).filename() == "a.png");
        auto q = resolve_inputs({(tmp.path / "?.png").string()});
        CHECK(q.size() == 2);
        auto none = resolve_inputs({(tmp.path / "z*.png").string()});
        CHECK(none.empty());
    }
    SUBCASE("literal paths pass through even when missing") {
        auto files = resolve_inputs({(tmp.path / "ghost.png").string()});
        REQUIRE(files.size() == 1);
        CHECK(fs::path(files[0]).filename() == "ghost.png");
    }
    SUBCASE("duplicates collapse") {
        auto files = resolve_inputs(
            {(tmp.path / "a.png").string(), (tmp.path / "*.png").string(), tmp.path.string()});
        int a_count = 0;
        for (const auto& f : files) a_count += fs::path(f).filename() == "a.png";
        CHECK(a_count == 1);
    }
    SUBCASE("empty specs and missing directories contribute nothing") {
        CHECK(resolve_inputs({""}).empty());
        CHECK(resolve_inputs({(tmp.path / "nodir" / "*.png").string()}).empty());
    }
}

TEST_CASE("run writes one record per input and matches ground truth") {
    TempDir tmp("sonoscrub_run_test");
    std::string glob = write_corpus(tmp.path / "corpus");
    PipelineConfig cfg = base_config(tmp, glob);

    RunSummary s = run(cfg);
    CHECK(s.processed == 24);
    CHECK(s.decode_errors == 0);
    CHECK(s.ocr_skipped == 0);
    auto lines = manifest_lines(cfg.io.manifest_path);
    REQUIRE(lines.size() == 24);

    // every detector agrees with the generator on this small mixed batch
    RunSummary sc = score(cfg.io.manifest_path, (tmp.path / "corpus" / "truth.jsonl").string());
    CHECK(sc.processed == 24);
    for (const auto& cat : score_categories()) {
        CHECK(sc.confusion.at(cat).fp == 0);
        CHECK(sc.confusion.at(cat).fn == 0);
    }

    SUBCASE("rerun is byte-identical") {
        std::string first = lines[0];
        RunSummary s2 = run(cfg);
        CHECK(manifest_lines(cfg.io.manifest_path) == lines);
        CHECK(s2.processed == s.processed);
        CHECK(first == manifest_lines(cfg.io.manifest_path)[0]);
    }
    SUBCASE("parallel run yields the same records in the same input order") {
        PipelineConfig par = cfg;
        par.workers = 4;
        par.io.manifest_path = (tmp.path / "parallel.jsonl").string();
        run(par);
        CHECK(manifest_lines(par.io.manifest_path) == lines);
    }
    SUBCASE("records are in sorted input order") {
        auto j0 = nlohmann::json::parse(lines.front());
        auto j1 = nlohmann::json::parse(lines.back());
        CHECK(j0.at("source_id") == corpus_source_id(11, 0));
        CHECK(j1.at("source_id") == corpus_source_id(11, 23));
    }
}

TEST_CASE("empty input list produces an empty manifest and zero summary") {
    TempDir tmp("sonoscrub_empty_test");
    PipelineConfig cfg;
    cfg.io.manifest_path = (tmp.path / "m.jsonl").string();
    RunSummary s = run(cfg);
    CHECK(s.processed == 0);
    CHECK(s.decode_errors == 0);
    CHECK(manifest_lines(cfg.io.manifest_path).empty());
    for (const auto& cat : score_categories()) CHECK(s.flag_counts.at(cat) == 0);
}

TEST_CASE("per-image failures are isolated as DECODE_ERROR records") {
    TempDir tmp("sonoscrub_decode_test");
    std::string glob = write_corpus(tmp.path / "corpus", 3, 6);
    std::ofstream(tmp.path / "corpus" / "broken.png") << "this is not a png";
    PipelineConfig cfg = base_config(tmp, glob);
    cfg.workers = 3;

    RunSummary s = run(cfg);
    CHECK(s.processed == 7);
    CHECK(s.decode_errors == 1);
    auto lines = manifest_lines(cfg.io.manifest_path);
    REQUIRE(lines.size() == 7);
    int broken_seen = 0;
    for (const auto& l : lines) {
        auto j = nlohmann::json::parse(l);
        if (j.at("source_id") == "broken") {
            ++broken_seen;
            CHECK(j.at("status") == "decode_error");
            CHECK_FALSE(j.contains("crop"));
            CHECK_FALSE(j.contains("text"));
        } else {
            CHECK(j.at("status") == "ok");
        }
    }
    CHECK(broken_seen == 1);

    SUBCASE("a missing literal input is also a DECODE_ERROR record") {
        cfg.io.inputs.push_back((tmp.path / "ghost.png").string());
        cfg.io.manifest_path = (tmp.path / "m2.jsonl").string();
        RunSummary s2 = run(cfg);
        CHECK(s2.processed == 8);
        CHECK(s2.decode_errors == 2);
    }
}

TEST_CASE("disabling a stage removes exactly its field") {
    TempDir tmp("sonoscrub_stage_test");
    std::string glob = write_corpus(tmp.path / "corpus", 5, 10);
    PipelineConfig cfg = base_config(tmp, glob);
    run(cfg);
    auto base = manifest_lines(cfg.io.manifest_path);

    struct Case {
        const char* key;
        void (*toggle)(StageToggles&);
    };
    const Case cases[] = {
        {"filter", [](StageToggles& t) { t.filters = false; }},
        {"dual", [](StageToggles& t) { t.dualview = false; }},
        {"calipers", [](StageToggles& t) { t.calipers = false; }},
        {"text", [](StageToggles& t) { t.textkx = false; }},
    };
    for (const Case& c : cases) {
        PipelineConfig mod = cfg;
        c.toggle(mod.stages);
        mod.io.manifest_path = (tmp.path / (std::string("m_") + c.key + ".jsonl")).string();
        run(mod);
        auto lines = manifest_lines(mod.io.manifest_path);
        REQUIRE(lines.size() == base.size());
        for (size_t i = 0; i < lines.size(); ++i) {
            auto expected = nlohmann::json::parse(base[i]);
            expected.erase(c.key);
            auto actual = nlohmann::json::parse(lines[i]);
            CHECK(actual == expected);
        }
    }
}

TEST_CASE("analyze_scan stage behavior") {
    Scene scene = corpus_item(21, 1);
    const Grammar grammar{};
    PipelineConfig cfg;

    SUBCASE("textkx without a backend is a ParameterError") {
        CHECK_THROWS_AS(analyze_scan(scene.image, cfg, nullptr, grammar), ParameterError);
    }
    SUBCASE("a failing OCR backend downgrades to OCR_SKIPPED, keeping other stages") {
        auto backend = make_backend("command:false");
        ScanReport r = analyze_scan(scene.image, cfg, backend.get(), grammar);
        CHECK(r.status == ScanStatus::OCR_SKIPPED);
        CHECK_FALSE(r.text.has_value());
        CHECK(r.crop.has_value());
        CHECK(r.filter.has_value());
        CHECK(r.dual_view.has_value());
        CHECK(r.calipers.has_value());
    }
    SUBCASE("caliper boxes and dual split are reported in original coordinates") {
        SceneSpec spec;
        spec.seed = 99;
        spec.width = 480;
        spec.height = 360;
        FeatureSpec cross;
        cross.kind = FeatureKind::CALIPER_CROSS;
        cross.x = 200;
        cross.y = 180;
        cross.size = 21;
        spec.features = {cross};
        Scene cal = render(spec);
        auto backend = make_backend("none");
        ScanReport r = analyze_scan(cal.image, cfg, backend.get(), grammar);
        REQUIRE(r.crop.has_value());
        REQUIRE(r.calipers.has_value());
        REQUIRE(r.calipers->present);
        REQUIRE(r.calipers->boxes.size() == 1);
        // the detected box contains the painted cross center in image coords
        CHECK(r.calipers->boxes[0].contains(200, 180));
        CHECK(r.crop->final_box.contains(r.calipers->boxes[0]));
    }
    SUBCASE("timings appear per enabled stage when requested") {
        cfg.io.emit_timings = true;
        cfg.stages.dualview = false;
        auto backend = make_backend("builtin");
        ScanReport r = analyze_scan(scene.image, cfg, backend.get(), grammar);
        CHECK(r.timings_ms.count("crop") == 1);
        CHECK(r.timings_ms.count("filters") == 1);
        CHECK(r.timings_ms.count("calipers") == 1);
        CHECK(r.timings_ms.count("textkx") == 1);
        CHECK(r.timings_ms.count("dualview") == 0);
        for (const auto& [stage, ms] : r.timings_ms) CHECK(ms >= 0.0);
    }
}

TEST_CASE("crop emission writes cropped copies with the configured suffix") {
    TempDir tmp("sonoscrub_crops_test");
    std::string glob = write_corpus(tmp.path / "corpus", 13, 4);
    PipelineConfig cfg = base_config(tmp, glob);
    cfg.io.crops_dir = (tmp.path / "crops").string();
    cfg.io.crop_suffix = "_scan";
    run(cfg);

    auto lines = manifest_lines(cfg.io.manifest_path);
    REQUIRE(lines.size() == 4);
    for (const auto& l : lines) {
        auto j = nlohmann::json::parse(l);
        std::string id = j.at("source_id");
        fs::path crop_path = fs::path(cfg.io.crops_dir) / (id + "_scan.png");
        REQUIRE(fs::exists(crop_path));
        auto box = j.at("crop").at("box");
        ScanImage cropped = load_image(crop_path.string());
        CHECK(cropped.width == box[2].get<int>() - box[0].get<int>());
        CHECK(cropped.height == box[3].get<int>() - box[1].get<int>());
    }
}

TEST_CASE("output problems are fatal config errors before processing") {
    TempDir tmp("sonoscrub_fatal_test");
    std::string glob = write_corpus(tmp.path / "corpus", 17, 2);
    PipelineConfig cfg = base_config(tmp, glob);

    SUBCASE("unwritable manifest path") {
        cfg.io.manifest_path = (tmp.path / "no" / "such" / "dir" / "m.jsonl").string();
        CHECK_THROWS_AS(run(cfg), ConfigError);
    }
    SUBCASE("empty manifest path") {
        cfg.io.manifest_path.clear();
        CHECK_THROWS_AS(run(cfg), ConfigError);
    }
    SUBCASE("crops dir blocked by an existing file") {
        std::ofstream(tmp.path / "blocked") << "x";
        cfg.io.crops_dir = (tmp.path / "blocked").string();
        CHECK_THROWS_AS(run(cfg), ConfigError);
    }
    SUBCASE("invalid config rejected up front") {
        cfg.workers = 0;
        CHECK_THROWS_AS(run(cfg), ConfigError);
    }
}
