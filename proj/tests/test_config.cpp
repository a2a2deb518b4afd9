#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sonoscrub/config.hpp"
#include "sonoscrub/textkx.hpp"

using namespace sonoscrub;

TEST_CASE("hsv range syntax") {
    HsvRange r = parse_hsv_range("345-15:0.45-1:0.35-1");
    CHECK(r.hue_lo == 345.0);
    CHECK(r.hue_hi == 15.0);
    CHECK(r.sat_lo == 0.45);
    CHECK(r.sat_hi == 1.0);
    CHECK(r.val_lo == 0.35);
    CHECK(r.val_hi == 1.0);
    CHECK(r.contains(350.0, 0.8, 0.9));  // wraps through red
    CHECK(r.contains(5.0, 0.8, 0.9));
    CHECK_FALSE(r.contains(180.0, 0.8, 0.9));

    HsvRange plain = parse_hsv_range("90-150:0-0.5:0.25-0.75");
    CHECK(plain.hue_lo == 90.0);
    CHECK(plain.hue_hi == 150.0);
    CHECK(plain.sat_hi == 0.5);

    SUBCASE("round trip through format") {
        for (const char* s : {"345-15:0.45-1:0.35-1", "0-359:0-1:0-1", "12.5-77.25:0.1-0.9:0-1"}) {
            HsvRange a = parse_hsv_range(s);
            CHECK(parse_hsv_range(format_hsv_range(a)) == a);
        }
    }
    SUBCASE("rejects malformed strings") {
        CHECK_THROWS_AS(parse_hsv_range("1-2:3-4"), ConfigError);          // missing band
        CHECK_THROWS_AS(parse_hsv_range("1:2:3"), ConfigError);            // no lo-hi
        CHECK_THROWS_AS(parse_hsv_range("a-b:0-1:0-1"), ConfigError);      // not numeric
        CHECK_THROWS_AS(parse_hsv_range("0-400:0-1:0-1"), ConfigError);    // hue out of range
        CHECK_THROWS_AS(parse_hsv_range("0-10:0-1.5:0-1"), ConfigError);   // sat > 1
        CHECK_THROWS_AS(parse_hsv_range("0-10:0.9-0.1:0-1"), ConfigError); // inverted band
        CHECK_THROWS_AS(parse_hsv_range("0-10:0-1:0.8-0.2"), ConfigError);
    }
}

TEST_CASE("default config text parses back to the default config") {
    PipelineConfig parsed = parse_config_text(default_config_text());
    CHECK(parsed == PipelineConfig{});
    CHECK_NOTHROW(validate_config(parsed));
}

TEST_CASE("format and parse are inverse on a fully customized config") {
    PipelineConfig cfg;
    cfg.stages = StageToggles{true, false, true, false, true};
    cfg.workers = 6;
    cfg.invalid_use_full_frame = true;
    cfg.io.inputs = {"/data/a.png", "/data/batch/*.png", "relative/dir"};
    cfg.io.manifest_path = "/out/manifest.jsonl";
    cfg.io.crops_dir = "/out/crops";
    cfg.io.crop_suffix = "_scanarea";
    cfg.io.emit_timings = true;
    cfg.cropper.threshold_offset = 12;
    cfg.cropper.morph_radius = 3;
    cfg.cropper.rect_fill_ratio = 0.955;
    cfg.cropper.enable_stage2 = false;
    cfg.filters.invalid_black_level = 6;
    cfg.filters.invalid_threshold = 0.8;
    cfg.filters.color_area_threshold = 0.004;
    cfg.filters.indicator_dilate_radius = 1;
    cfg.filters.grayscale_tolerance = 10;
    cfg.filters.rect_min_side_fraction = 0.04;
    cfg.filters.span_fraction = 0.55;
    cfg.filters.doppler_ranges = {parse_hsv_range("345-15:0.45-1:0.35-1"),
                                  parse_hsv_range("200-260:0.4-1:0.3-1")};
    cfg.filters.indicator_ranges = {parse_hsv_range("80-160:0.3-1:0.25-1")};
    cfg.calipers.border_mask_fraction = 0.12;
    cfg.calipers.box_min = 8;
    cfg.calipers.box_max = 80;
    cfg.calipers.dilate_radius = 2;
    cfg.calipers.enhance_threshold = 120;
    cfg.calipers.method = CaliperMethod::CONTOUR;
    cfg.calipers.hough_min_votes = 25;
    cfg.calipers.hough_min_len = 20;
    cfg.calipers.hough_max_gap = 6;
    cfg.calipers.intersection_angle_min = 12.5;
    cfg.dualview.width_height_min_ratio = 0.8;
    cfg.dualview.midline_edge_min = 90;
    cfg.dualview.neighbor_margin = 12;
    cfg.dualview.neighbor_offset = 9;
    cfg.dualview.canny_lo = 40.0;
    cfg.dualview.canny_hi = 140.0;
    cfg.textkx.backend = "command:ocr-tool --fast";
    cfg.textkx.min_confidence = 0.5;
    cfg.textkx.pattern_overrides = {
        {"procedural", {"\\bABLATION\\b", "\\bCRYO\\b"}},
        {"clock", {"\\bH(1[0-2]|0?[1-9])M([0-5][0-9])\\b"}},
    };
    PipelineConfig parsed = parse_config_text(format_config(cfg));
    CHECK(parsed == cfg);
}

TEST_CASE("ini parsing details") {
    SUBCASE("comments, blank lines, whitespace") {
        PipelineConfig cfg = parse_config_text(
            "# leading comment\n"
            "\n"
            "[pipeline]\n"
            "  workers =  3  \n"
            "; alt comment style\n"
            "[io]\n"
            "manifest = out.jsonl\n");
        CHECK(cfg.workers == 3);
        CHECK(cfg.io.manifest_path == "out.jsonl");
        CHECK(cfg.stages == StageToggles{});  // untouched sections keep defaults
    }
    SUBCASE("stages list replaces the toggle set") {
        PipelineConfig cfg = parse_config_text("[pipeline]\nstages = crop, textkx\n");
        CHECK(cfg.stages.crop);
        CHECK(cfg.stages.textkx);
        CHECK_FALSE(cfg.stages.filters);
        CHECK_FALSE(cfg.stages.dualview);
        CHECK_FALSE(cfg.stages.calipers);
    }
    SUBCASE("input key repeats and appends") {
        PipelineConfig cfg =
            parse_config_text("[io]\ninput = a.png\ninput = b/*.png\ninput = c\n");
        CHECK(cfg.io.inputs == std::vector<std::string>{"a.png", "b/*.png", "c"});
    }
    SUBCASE("empty input value clears to an empty list") {
        PipelineConfig cfg = parse_config_text("[io]\ninput =\n");
        CHECK(cfg.io.inputs.empty());
    }
    SUBCASE("range lists") {
        PipelineConfig cfg = parse_config_text(
            "[filters]\ndoppler_ranges = 345-15:0.45-1:0.35-1, 200-260:0.4-1:0.3-1\n"
            "indicator_ranges =\n");
        CHECK(cfg.filters.doppler_ranges.size() == 2);
        CHECK(cfg.filters.doppler_ranges[1].hue_lo == 200.0);
        CHECK(cfg.filters.indicator_ranges.empty());
    }
    SUBCASE("pattern overrides: first line replaces, later lines append") {
        PipelineConfig cfg = parse_config_text(
            "[textkx.patterns]\n"
            "procedural = \\bABLATION\\b\n"
            "procedural = \\bCRYO\\b\n"
            "clock = \\bH(1[0-2]|0?[1-9])M([0-5][0-9])\\b\n");
        REQUIRE(cfg.textkx.pattern_overrides.count("procedural"));
        CHECK(cfg.textkx.pattern_overrides["procedural"] ==
              std::vector<std::string>{"\\bABLATION\\b", "\\bCRYO\\b"});
        // regex braces and alternation survive because patterns are one per line
        CHECK(cfg.textkx.pattern_overrides["clock"].size() == 1);
        CHECK_NOTHROW(Grammar(cfg.textkx));
    }
    SUBCASE("enum-valued keys") {
        PipelineConfig cfg = parse_config_text("[calipers]\nmethod = contour\n");
        CHECK(cfg.calipers.method == CaliperMethod::CONTOUR);
        CHECK_THROWS_AS(parse_config_text("[calipers]\nmethod = magic\n"), ConfigError);
    }
}

TEST_CASE("ini errors carry their line number") {
    auto message_of = [](const std::string& text) {
        try {
            parse_config_text(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message_of("[nosuch]\n").find("line 1") != std::string::npos);
    CHECK(message_of("[pipeline]\nbogus = 1\n").find("line 2") != std::string::npos);
    CHECK(message_of("workers = 2\n").find("before any section") != std::string::npos);
    CHECK(message_of("[pipeline]\nworkers\n").find("key = value") != std::string::npos);
    CHECK(message_of("[pipeline\n").find("unterminated") != std::string::npos);

    CHECK_THROWS_AS(parse_config_text("[pipeline]\nworkers = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[pipeline]\nworkers = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[io]\nemit_timings = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[cropper]\nrect_fill_ratio = high\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[pipeline]\nstages = crop, resample\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[textkx.patterns]\nnosuchcategory = X\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[textkx.patterns]\nclock =\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[filters]\ndoppler_ranges = 1-2\n"), ConfigError);
}

TEST_CASE("validate_config enforces structural invariants") {
    CHECK_NOTHROW(validate_config(PipelineConfig{}));

    PipelineConfig cfg;
    cfg.stages = StageToggles{false, false, false, false, false};
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.workers = 0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.textkx.min_confidence = 1.5;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.calipers.border_mask_fraction = 0.5;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.calipers.box_min = 0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.calipers.box_max = cfg.calipers.box_min - 1;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.filters.invalid_threshold = 1.25;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.dualview.canny_hi = cfg.dualview.canny_lo - 1;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.textkx.backend = "easyocr";
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.textkx.backend = "command:";
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);

    cfg = PipelineConfig{};
    cfg.textkx.backend = "command:ocr --fast";
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("load_config reads files and reports missing ones") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "sonoscrub_config_test";
    fs::create_directories(dir);
    fs::path file = dir / "run.conf";
    {
        std::ofstream out(file);
        out << "[pipeline]\nworkers = 5\n";
    }
    CHECK(load_config(file.string()).workers == 5);
    CHECK_THROWS_AS(load_config((dir / "absent.conf").string()), ConfigError);
    fs::remove_all(dir);
}
