#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sonoscrub/score.hpp"
#include "sonoscrub/synthgen.hpp"

using namespace sonoscrub;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "sonoscrub_score_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::vector<std::string>& lines) const {
        fs::path p = path / name;
        std::ofstream out(p);
        for (const auto& l : lines) out << l << "\n";
        return p.string();
    }
};

ScanReport prediction(const std::string& id) {
    ScanReport r;
    r.source_id = id;
    r.width = 100;
    r.height = 100;
    r.filter = FilterVerdict{};
    r.dual_view = DualViewResult{};
    r.calipers = CaliperReport{};
    r.text = TextAnnotation{};
    return r;
}

GroundTruth truth_like(const ScanReport& r) {
    GroundTruth t;
    t.invalid = r.filter && r.filter->invalid;
    t.non_b_mode = r.filter && r.filter->non_b_mode;
    t.has_calipers = r.calipers && r.calipers->present;
    t.is_dual = r.dual_view && r.dual_view->is_dual;
    if (t.is_dual && r.dual_view->split_x) t.seam_x = *r.dual_view->split_x;
    if (r.text) {
        t.text_present = detect_text_presence(r.text->tokens);
        t.laterality = r.text->laterality;
        t.orientation = r.text->orientation;
        t.clock = r.text->clock_position;
        t.distance = r.text->distance_from_nipple;
        t.axilla = r.text->axilla;
        t.measurement = r.text->lesion_measurement;
        t.procedural = r.text->procedural;
    }
    return t;
}

}  // namespace

TEST_CASE("sensitivity and specificity handle zero denominators as undefined") {
    ConfusionCells c{55, 44, 609, 72};
    CHECK(c.total() == 780);
    REQUIRE(sensitivity(c));
    REQUIRE(specificity(c));
    CHECK(*sensitivity(c) == doctest::Approx(55.0 / 127.0).epsilon(1e-12));
    CHECK(*specificity(c) == doctest::Approx(609.0 / 653.0).epsilon(1e-12));

    CHECK_FALSE(sensitivity(ConfusionCells{0, 3, 7, 0}));  // no truth positives
    CHECK_FALSE(specificity(ConfusionCells{5, 0, 0, 5}));  // no truth negatives
    CHECK(specificity(ConfusionCells{0, 3, 7, 0}).has_value());
    CHECK(sensitivity(ConfusionCells{5, 0, 0, 5}).has_value());
}

TEST_CASE("confusion-cell reconstruction of published operating points") {
    struct Row {
        ConfusionCells cells;
        double sens, spec;
    };
    const Row rows[] = {
        {{55, 44, 609, 72}, 0.433, 0.933},
        {{117, 11, 637, 15}, 0.886, 0.983},
        {{10, 1, 768, 1}, 0.909, 0.999},
    };
    for (const Row& row : rows) {
        CHECK(std::abs(*sensitivity(row.cells) - row.sens) <= 0.001);
        CHECK(std::abs(*specificity(row.cells) - row.spec) <= 0.001);
    }
}

TEST_CASE("summarize_reports counts positives and statuses") {
    ScanReport a = prediction("a");
    a.filter->invalid = true;
    a.calipers->present = true;
    ScanReport b = prediction("b");
    b.status = ScanStatus::OCR_SKIPPED;
    b.text.reset();
    ScanReport c;
    c.source_id = "c";
    c.status = ScanStatus::DECODE_ERROR;
    ScanReport d = prediction("d");
    d.text->laterality = Laterality::LEFT;
    d.text->clock_position = ClockPosition{3, 0};
    d.text->tokens = {OcrToken{"LT", BoundingBox{0, 0, 11, 7}, 1.0}};

    RunSummary s = summarize_reports({a, b, c, d});
    CHECK(s.processed == 4);
    CHECK(s.decode_errors == 1);
    CHECK(s.ocr_skipped == 1);
    CHECK(s.flag_counts.at("invalid") == 1);
    CHECK(s.flag_counts.at("calipers") == 1);
    CHECK(s.flag_counts.at("laterality") == 1);
    CHECK(s.flag_counts.at("clock") == 1);
    CHECK(s.flag_counts.at("text_present") == 1);
    CHECK(s.flag_counts.at("dual_view") == 0);  // every category is listed
}

TEST_CASE("score joins manifest and truth") {
    TempDir tmp;

    ScanReport pos = prediction("p1");
    pos.filter->invalid = true;
    pos.filter->non_b_mode = true;
    pos.calipers->present = true;
    pos.dual_view->is_dual = true;
    pos.dual_view->split_x = 50;
    pos.text->tokens = {OcrToken{"RT", BoundingBox{0, 0, 11, 7}, 1.0}};
    pos.text->laterality = Laterality::RIGHT;
    pos.text->orientation = Orientation::RADIAL;
    pos.text->clock_position = ClockPosition{4, 5};
    pos.text->distance_from_nipple = NippleDistance{2.5, DistanceUnit::CM};
    pos.text->axilla = true;
    pos.text->lesion_measurement = true;
    pos.text->procedural = true;
    ScanReport neg = prediction("n1");

    SUBCASE("perfect agreement scores 1.0 everywhere") {
        auto manifest = tmp.file("m.jsonl", {report_json_line(pos), report_json_line(neg)});
        auto truth = tmp.file("t.jsonl", {truth_json_line("p1", truth_like(pos)),
                                          truth_json_line("n1", truth_like(neg))});
        RunSummary s = score(manifest, truth);
        CHECK(s.processed == 2);
        CHECK(s.warnings.empty());
        for (const auto& cat : score_categories()) {
            const ConfusionCells& c = s.confusion.at(cat);
            CHECK(c.total() == 2);
            CHECK(c.tp == 1);
            CHECK(c.tn == 1);
            CHECK(*sensitivity(c) == 1.0);
            CHECK(*specificity(c) == 1.0);
        }
    }
    SUBCASE("a manifest scored against itself is perfect") {
        auto manifest = tmp.file("m.jsonl", {report_json_line(pos), report_json_line(neg)});
        RunSummary s = score(manifest, manifest);
        for (const auto& cat : score_categories()) {
            CHECK(s.confusion.at(cat).fp == 0);
            CHECK(s.confusion.at(cat).fn == 0);
        }
    }
    SUBCASE("all-negative predictions on mixed truth: sensitivity 0, specificity 1") {
        auto manifest = tmp.file("m.jsonl", {report_json_line(prediction("p1")),
                                             report_json_line(prediction("n1"))});
        auto truth = tmp.file("t.jsonl", {truth_json_line("p1", truth_like(pos)),
                                          truth_json_line("n1", truth_like(neg))});
        RunSummary s = score(manifest, truth);
        for (const auto& cat : score_categories()) {
            const ConfusionCells& c = s.confusion.at(cat);
            CHECK(*sensitivity(c) == 0.0);
            CHECK(*specificity(c) == 1.0);
        }
    }
    SUBCASE("wrong value on a valued category counts as FN, not TP") {
        ScanReport wrong = prediction("p1");
        wrong.text->tokens = pos.text->tokens;
        wrong.text->laterality = Laterality::LEFT;               // truth says RIGHT
        wrong.text->orientation = Orientation::RADIAL;           // matches
        wrong.text->clock_position = ClockPosition{4, 35};       // truth says 4:05
        wrong.text->distance_from_nipple = NippleDistance{2.5, DistanceUnit::MM};  // unit off
        auto manifest = tmp.file("m.jsonl", {report_json_line(wrong)});
        auto truth = tmp.file("t.jsonl", {truth_json_line("p1", truth_like(pos))});
        RunSummary s = score(manifest, truth);
        CHECK(s.confusion.at("laterality").fn == 1);
        CHECK(s.confusion.at("laterality").tp == 0);
        CHECK(s.confusion.at("laterality").fp == 0);
        CHECK(s.confusion.at("orientation").tp == 1);
        CHECK(s.confusion.at("clock").fn == 1);
        CHECK(s.confusion.at("distance").fn == 1);
        // n is conserved even for wrong-value rows
        for (const auto& cat : score_categories()) CHECK(s.confusion.at(cat).total() == 1);
    }
    SUBCASE("false positives on truth negatives") {
        auto manifest = tmp.file("m.jsonl", {report_json_line(pos)});
        auto truth = tmp.file("t.jsonl", {truth_json_line("p1", truth_like(neg))});
        RunSummary s = score(manifest, truth);
        for (const auto& cat : score_categories()) CHECK(s.confusion.at(cat).fp == 1);
    }
    SUBCASE("unmatched ids are excluded with warnings") {
        auto manifest = tmp.file("m.jsonl", {report_json_line(pos), report_json_line(neg)});
        auto truth = tmp.file("t.jsonl", {truth_json_line("p1", truth_like(pos)),
                                          truth_json_line("zzz", truth_like(neg))});
        RunSummary s = score(manifest, truth);
        CHECK(s.processed == 1);
        REQUIRE(s.warnings.size() == 2);
        CHECK(s.warnings[0].find("n1") != std::string::npos);
        CHECK(s.warnings[1].find("zzz") != std::string::npos);
        for (const auto& cat : score_categories()) CHECK(s.confusion.at(cat).total() == 1);
    }
    SUBCASE("duplicate ids keep the first record and warn") {
        auto manifest = tmp.file("m.jsonl", {report_json_line(pos), report_json_line(pos)});
        auto truth = tmp.file("t.jsonl", {truth_json_line("p1", truth_like(pos))});
        RunSummary s = score(manifest, truth);
        CHECK(s.processed == 1);
        REQUIRE(s.warnings.size() == 1);
        CHECK(s.warnings[0].find("duplicate") != std::string::npos);
    }
    SUBCASE("file and record errors") {
        CHECK_THROWS_AS(score((tmp.path / "absent.jsonl").string(),
                              (tmp.path / "absent.jsonl").string()),
                        ConfigError);
        auto bad = tmp.file("bad.jsonl", {"{not json"});
        auto good = tmp.file("g.jsonl", {report_json_line(neg)});
        CHECK_THROWS_AS(score(bad, good), FormatError);
        auto noid = tmp.file("noid.jsonl", {R"({"width":3})"});
        CHECK_THROWS_AS(score(noid, good), FormatError);
    }
}
