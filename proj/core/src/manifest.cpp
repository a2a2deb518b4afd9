#include "sonoscrub/manifest.hpp"

#include <cstdio>

#include "json.hpp"

namespace sonoscrub {
namespace {

using nlohmann::json;

json box_to_json(const BoundingBox& b) {
    return json::array({b.x_left, b.y_top, b.x_right, b.y_bottom});
}

BoundingBox box_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw FormatError("box is not a 4-element array");
    return BoundingBox{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

std::string format_clock(const ClockPosition& c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d:%02d", c.hour, c.minute);
    return buf;
}

ClockPosition parse_clock(const std::string& s) {
    int h = 0, m = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d:%d%c", &h, &m, &tail) != 2 || h < 1 || h > 12 || m < 0 ||
        m > 59)
        throw FormatError("clock value '" + s + "' is not h:mm");
    return ClockPosition{h, m};
}

json text_to_json(const TextAnnotation& t) {
    json j;
    j["axilla"] = t.axilla;
    if (t.clock_position) j["clock"] = format_clock(*t.clock_position);
    if (t.distance_from_nipple) {
        j["distance"]["value"] = t.distance_from_nipple->value;
        j["distance"]["unit"] = to_string(t.distance_from_nipple->unit);
    }
    j["laterality"] = to_string(t.laterality);
    j["measurement"] = t.lesion_measurement;
    j["notes"] = t.notes;
    j["orientation"] = to_string(t.orientation);
    j["present"] = detect_text_presence(t.tokens);
    j["procedural"] = t.procedural;
    j["raw"] = t.raw_concatenation;
    json spans = json::array();
    for (const auto& s : t.spans)
        spans.push_back({{"field", s.field},
                         {"first", s.token_first},
                         {"last", s.token_last},
                         {"text", s.text}});
    j["spans"] = spans;
    json tokens = json::array();
    for (const auto& tok : t.tokens)
        tokens.push_back(
            {{"box", box_to_json(tok.bbox)}, {"conf", tok.confidence}, {"text", tok.text}});
    j["tokens"] = tokens;
    return j;
}

TextAnnotation text_from_json(const json& j) {
    TextAnnotation t;
    t.axilla = j.at("axilla").get<bool>();
    if (j.contains("clock")) t.clock_position = parse_clock(j.at("clock").get<std::string>());
    if (j.contains("distance")) {
        NippleDistance d;
        d.value = j.at("distance").at("value").get<double>();
        d.unit = distance_unit_from_string(j.at("distance").at("unit").get<std::string>());
        t.distance_from_nipple = d;
    }
    t.laterality = laterality_from_string(j.at("laterality").get<std::string>());
    t.lesion_measurement = j.at("measurement").get<bool>();
    t.notes = j.at("notes").get<std::vector<std::string>>();
    t.orientation = orientation_from_string(j.at("orientation").get<std::string>());
    t.procedural = j.at("procedural").get<bool>();
    t.raw_concatenation = j.at("raw").get<std::string>();
    for (const auto& s : j.at("spans")) {
        MatchSpan span;
        span.field = s.at("field").get<std::string>();
        span.token_first = s.at("first").get<int>();
        span.token_last = s.at("last").get<int>();
        span.text = s.at("text").get<std::string>();
        t.spans.push_back(span);
    }
    for (const auto& tok : j.at("tokens")) {
        OcrToken o;
        o.bbox = box_from_json(tok.at("box"));
        o.confidence = tok.at("conf").get<double>();
        o.text = tok.at("text").get<std::string>();
        t.tokens.push_back(o);
    }
    return t;
}

}  // namespace

const char* to_string(ScanStatus s) {
    switch (s) {
        case ScanStatus::OK: return "ok";
        case ScanStatus::DECODE_ERROR: return "decode_error";
        case ScanStatus::OCR_SKIPPED: return "ocr_skipped";
    }
    return "ok";
}

ScanStatus scan_status_from_string(const std::string& s) {
    if (s == "ok") return ScanStatus::OK;
    if (s == "decode_error") return ScanStatus::DECODE_ERROR;
    if (s == "ocr_skipped") return ScanStatus::OCR_SKIPPED;
    throw FormatError("unknown scan status '" + s + "'");
}

std::string report_json_line(const ScanReport& r) {
    json j;
    j["source_id"] = r.source_id;
    j["width"] = r.width;
    j["height"] = r.height;
    j["status"] = to_string(r.status);
    if (r.crop) {
        json& c = j["crop"];
        c["box"] = box_to_json(r.crop->final_box);
        c["mode_value"] = r.crop->mode_value;
        c["shape"] = to_string(r.crop->shape);
        c["stage1_box"] = box_to_json(r.crop->stage1_box);
    }
    if (r.filter) {
        json& f = j["filter"];
        f["black_fraction"] = r.filter->black_fraction;
        f["color_fraction"] = r.filter->color_fraction;
        f["invalid"] = r.filter->invalid;
        f["non_b_mode"] = r.filter->non_b_mode;
        f["trigger"] = to_string(r.filter->trigger);
    }
    if (r.dual_view) {
        json& d = j["dual"];
        d["is_dual"] = r.dual_view->is_dual;
        if (r.dual_view->split_x) d["split_x"] = *r.dual_view->split_x;
    }
    if (r.calipers) {
        json& c = j["calipers"];
        json boxes = json::array();
        for (const auto& b : r.calipers->boxes) boxes.push_back(box_to_json(b));
        c["boxes"] = boxes;
        c["method_used"] = to_string(r.calipers->method_used);
        c["present"] = r.calipers->present;
    }
    if (r.text) j["text"] = text_to_json(*r.text);
    if (!r.timings_ms.empty()) j["timings_ms"] = r.timings_ms;
    return j.dump();
}

ScanReport report_from_json_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest record is not valid JSON: ") + e.what());
    }
    try {
        ScanReport r;
        r.source_id = j.at("source_id").get<std::string>();
        r.width = j.at("width").get<int>();
        r.height = j.at("height").get<int>();
        r.status = scan_status_from_string(j.at("status").get<std::string>());
        if (j.contains("crop")) {
            const json& c = j.at("crop");
            CropResult cr;
            cr.final_box = box_from_json(c.at("box"));
            cr.mode_value = c.at("mode_value").get<int>();
            cr.shape = scan_shape_from_string(c.at("shape").get<std::string>());
            cr.stage1_box = box_from_json(c.at("stage1_box"));
            r.crop = cr;
        }
        if (j.contains("filter")) {
            const json& f = j.at("filter");
            FilterVerdict v;
            v.black_fraction = f.at("black_fraction").get<double>();
            v.color_fraction = f.at("color_fraction").get<double>();
            v.invalid = f.at("invalid").get<bool>();
            v.non_b_mode = f.at("non_b_mode").get<bool>();
            v.trigger = filter_trigger_from_string(f.at("trigger").get<std::string>());
            r.filter = v;
        }
        if (j.contains("dual")) {
            const json& d = j.at("dual");
            DualViewResult dv;
            dv.is_dual = d.at("is_dual").get<bool>();
            if (d.contains("split_x")) dv.split_x = d.at("split_x").get<int>();
            r.dual_view = dv;
        }
        if (j.contains("calipers")) {
            const json& c = j.at("calipers");
            CaliperReport rep;
            for (const auto& b : c.at("boxes")) rep.boxes.push_back(box_from_json(b));
            rep.method_used = caliper_method_from_string(c.at("method_used").get<std::string>());
            rep.present = c.at("present").get<bool>();
            r.calipers = rep;
        }
        if (j.contains("text")) r.text = text_from_json(j.at("text"));
        if (j.contains("timings_ms"))
            r.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest record missing or mistyped field: ") + e.what());
    }
}

std::vector<ScanReport> read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    std::vector<ScanReport> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            out.push_back(report_from_json_line(line));
        } catch (const FormatError& e) {
            throw FormatError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

ManifestWriter::ManifestWriter(const std::string& path) : path_(path) {
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw ConfigError("cannot open manifest '" + path + "' for writing");
}

void ManifestWriter::write_line(const std::string& line) {
    std::lock_guard<std::mutex> lock(mu_);
    out_ << line << '\n';
    if (!out_) throw ConfigError("write failed on manifest '" + path_ + "'");
    out_.flush();
}

}  // namespace sonoscrub
