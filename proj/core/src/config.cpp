#include "sonoscrub/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

namespace sonoscrub {
namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(line, "expected a boolean, got '" + v + "'");
}

int parse_int(const std::string& v, int line) {
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(line, "expected an integer, got '" + v + "'");
    return out;
}

double parse_double(const std::string& v, int line) {
    size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + v + "'");
    }
    if (used != v.size()) fail(line, "expected a number, got '" + v + "'");
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::pair<double, double> parse_band(const std::string& s) {
    auto halves = split(s, '-');
    if (halves.size() != 2) throw ConfigError("HSV band '" + s + "' is not lo-hi");
    try {
        size_t ua = 0, ub = 0;
        double a = std::stod(trim(halves[0]), &ua);
        double b = std::stod(trim(halves[1]), &ub);
        if (ua != trim(halves[0]).size() || ub != trim(halves[1]).size())
            throw std::invalid_argument("trailing junk");
        return {a, b};
    } catch (const std::exception&) {
        throw ConfigError("HSV band '" + s + "' is not numeric");
    }
}

std::string format_number(double v) {
    // Shortest round-trip form keeps format_config -> parse stable.
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

std::string format_range_list(const std::vector<HsvRange>& rs) {
    std::string out;
    for (size_t i = 0; i < rs.size(); ++i) {
        if (i) out += ", ";
        out += format_hsv_range(rs[i]);
    }
    return out;
}

const std::vector<std::string> kPatternCategories = {
    "left", "right", "antiradial", "radial", "transverse", "sagittal",
    "longitudinal", "oblique", "clock", "distance", "measurement",
    "axilla", "procedural"};

bool is_pattern_category(const std::string& name) {
    for (const auto& c : kPatternCategories)
        if (c == name) return true;
    return false;
}

}  // namespace

HsvRange parse_hsv_range(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.size() != 3)
        throw ConfigError("HSV range '" + s + "' is not hue:sat:val");
    HsvRange r;
    std::tie(r.hue_lo, r.hue_hi) = parse_band(trim(parts[0]));
    std::tie(r.sat_lo, r.sat_hi) = parse_band(trim(parts[1]));
    std::tie(r.val_lo, r.val_hi) = parse_band(trim(parts[2]));
    if (r.hue_lo < 0 || r.hue_lo >= 360 || r.hue_hi < 0 || r.hue_hi >= 360)
        throw ConfigError("HSV range '" + s + "': hue must lie in [0, 360)");
    if (r.sat_lo < 0 || r.sat_hi > 1 || r.sat_lo > r.sat_hi)
        throw ConfigError("HSV range '" + s + "': saturation must be an ordered band in [0, 1]");
    if (r.val_lo < 0 || r.val_hi > 1 || r.val_lo > r.val_hi)
        throw ConfigError("HSV range '" + s + "': value must be an ordered band in [0, 1]");
    return r;
}

std::string format_hsv_range(const HsvRange& r) {
    return format_number(r.hue_lo) + "-" + format_number(r.hue_hi) + ":" +
           format_number(r.sat_lo) + "-" + format_number(r.sat_hi) + ":" +
           format_number(r.val_lo) + "-" + format_number(r.val_hi);
}

PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::map<std::string, bool> category_seen;
    int line = 0;
    bool inputs_touched = false;

    using Setter = std::function<void(const std::string&, int)>;
    const std::map<std::string, std::map<std::string, Setter>> table = {
        {"pipeline",
         {{"stages",
           [&](const std::string& v, int ln) {
               StageToggles t{false, false, false, false, false};
               for (auto& part : split(v, ',')) {
                   std::string name = trim(part);
                   if (name == "crop") t.crop = true;
                   else if (name == "filters") t.filters = true;
                   else if (name == "dualview") t.dualview = true;
                   else if (name == "calipers") t.calipers = true;
                   else if (name == "textkx") t.textkx = true;
                   else fail(ln, "unknown stage '" + name + "'");
               }
               cfg.stages = t;
           }},
          {"workers", [&](const std::string& v, int ln) { cfg.workers = parse_int(v, ln); }},
          {"invalid_use_full_frame",
           [&](const std::string& v, int ln) { cfg.invalid_use_full_frame = parse_bool(v, ln); }}}},
        {"io",
         {{"input",
           [&](const std::string& v, int) {
               if (!inputs_touched) cfg.io.inputs.clear();
               inputs_touched = true;
               if (!v.empty()) cfg.io.inputs.push_back(v);
           }},
          {"manifest", [&](const std::string& v, int) { cfg.io.manifest_path = v; }},
          {"crops_dir", [&](const std::string& v, int) { cfg.io.crops_dir = v; }},
          {"crop_suffix", [&](const std::string& v, int) { cfg.io.crop_suffix = v; }},
          {"emit_timings",
           [&](const std::string& v, int ln) { cfg.io.emit_timings = parse_bool(v, ln); }}}},
        {"cropper",
         {{"threshold_offset",
           [&](const std::string& v, int ln) { cfg.cropper.threshold_offset = parse_int(v, ln); }},
          {"morph_radius",
           [&](const std::string& v, int ln) { cfg.cropper.morph_radius = parse_int(v, ln); }},
          {"rect_fill_ratio",
           [&](const std::string& v, int ln) { cfg.cropper.rect_fill_ratio = parse_double(v, ln); }},
          {"enable_stage2",
           [&](const std::string& v, int ln) { cfg.cropper.enable_stage2 = parse_bool(v, ln); }}}},
        {"filters",
         {{"invalid_black_level",
           [&](const std::string& v, int ln) { cfg.filters.invalid_black_level = parse_int(v, ln); }},
          {"invalid_threshold",
           [&](const std::string& v, int ln) { cfg.filters.invalid_threshold = parse_double(v, ln); }},
          {"color_area_threshold",
           [&](const std::string& v, int ln) { cfg.filters.color_area_threshold = parse_double(v, ln); }},
          {"indicator_dilate_radius",
           [&](const std::string& v, int ln) { cfg.filters.indicator_dilate_radius = parse_int(v, ln); }},
          {"grayscale_tolerance",
           [&](const std::string& v, int ln) { cfg.filters.grayscale_tolerance = parse_int(v, ln); }},
          {"rect_min_side_fraction",
           [&](const std::string& v, int ln) { cfg.filters.rect_min_side_fraction = parse_double(v, ln); }},
          {"span_fraction",
           [&](const std::string& v, int ln) { cfg.filters.span_fraction = parse_double(v, ln); }},
          {"doppler_ranges",
           [&](const std::string& v, int ln) {
               cfg.filters.doppler_ranges.clear();
               for (auto& part : split(v, ','))
                   if (!trim(part).empty()) {
                       try {
                           cfg.filters.doppler_ranges.push_back(parse_hsv_range(trim(part)));
                       } catch (const ConfigError& e) {
                           fail(ln, e.what());
                       }
                   }
           }},
          {"indicator_ranges",
           [&](const std::string& v, int ln) {
               cfg.filters.indicator_ranges.clear();
               for (auto& part : split(v, ','))
                   if (!trim(part).empty()) {
                       try {
                           cfg.filters.indicator_ranges.push_back(parse_hsv_range(trim(part)));
                       } catch (const ConfigError& e) {
                           fail(ln, e.what());
                       }
                   }
           }}}},
        {"calipers",
         {{"border_mask_fraction",
           [&](const std::string& v, int ln) { cfg.calipers.border_mask_fraction = parse_double(v, ln); }},
          {"box_min",
           [&](const std::string& v, int ln) { cfg.calipers.box_min = parse_int(v, ln); }},
          {"box_max",
           [&](const std::string& v, int ln) { cfg.calipers.box_max = parse_int(v, ln); }},
          {"dilate_radius",
           [&](const std::string& v, int ln) { cfg.calipers.dilate_radius = parse_int(v, ln); }},
          {"enhance_threshold",
           [&](const std::string& v, int ln) { cfg.calipers.enhance_threshold = parse_int(v, ln); }},
          {"method",
           [&](const std::string& v, int ln) {
               try {
                   cfg.calipers.method = caliper_method_from_string(v);
               } catch (const Error& e) {
                   fail(ln, e.what());
               }
           }},
          {"hough_min_votes",
           [&](const std::string& v, int ln) { cfg.calipers.hough_min_votes = parse_int(v, ln); }},
          {"hough_min_len",
           [&](const std::string& v, int ln) { cfg.calipers.hough_min_len = parse_int(v, ln); }},
          {"hough_max_gap",
           [&](const std::string& v, int ln) { cfg.calipers.hough_max_gap = parse_int(v, ln); }},
          {"intersection_angle_min",
           [&](const std::string& v, int ln) { cfg.calipers.intersection_angle_min = parse_double(v, ln); }}}},
        {"dualview",
         {{"width_height_min_ratio",
           [&](const std::string& v, int ln) { cfg.dualview.width_height_min_ratio = parse_double(v, ln); }},
          {"midline_edge_min",
           [&](const std::string& v, int ln) { cfg.dualview.midline_edge_min = parse_int(v, ln); }},
          {"neighbor_margin",
           [&](const std::string& v, int ln) { cfg.dualview.neighbor_margin = parse_int(v, ln); }},
          {"neighbor_offset",
           [&](const std::string& v, int ln) { cfg.dualview.neighbor_offset = parse_int(v, ln); }},
          {"canny_lo",
           [&](const std::string& v, int ln) { cfg.dualview.canny_lo = parse_double(v, ln); }},
          {"canny_hi",
           [&](const std::string& v, int ln) { cfg.dualview.canny_hi = parse_double(v, ln); }}}},
        {"textkx",
         {{"backend", [&](const std::string& v, int) { cfg.textkx.backend = v; }},
          {"min_confidence",
           [&](const std::string& v, int ln) { cfg.textkx.min_confidence = parse_double(v, ln); }}}},
    };

    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "textkx.patterns" && table.find(section) == table.end())
                fail(line, "unknown section '" + section + "'");
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (section.empty()) fail(line, "key '" + key + "' appears before any section");
        if (section == "textkx.patterns") {
            if (!is_pattern_category(key)) fail(line, "unknown pattern category '" + key + "'");
            if (value.empty()) fail(line, "empty pattern for category '" + key + "'");
            auto& list = cfg.textkx.pattern_overrides[key];
            if (!category_seen[key]) list.clear();
            category_seen[key] = true;
            list.push_back(value);
            continue;
        }
        const auto& keys = table.at(section);
        auto it = keys.find(key);
        if (it == keys.end()) fail(line, "unknown key '" + key + "' in section [" + section + "]");
        it->second(value, line);
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string format_config(const PipelineConfig& cfg) {
    std::ostringstream out;
    auto stages = [&] {
        std::string s;
        auto add = [&](bool on, const char* name) {
            if (!on) return;
            if (!s.empty()) s += ", ";
            s += name;
        };
        add(cfg.stages.crop, "crop");
        add(cfg.stages.filters, "filters");
        add(cfg.stages.dualview, "dualview");
        add(cfg.stages.calipers, "calipers");
        add(cfg.stages.textkx, "textkx");
        return s;
    }();
    out << "[pipeline]\n";
    out << "stages = " << stages << "\n";
    out << "workers = " << cfg.workers << "\n";
    out << "invalid_use_full_frame = " << (cfg.invalid_use_full_frame ? "true" : "false") << "\n";
    out << "\n[io]\n";
    if (cfg.io.inputs.empty()) out << "input =\n";
    for (const auto& i : cfg.io.inputs) out << "input = " << i << "\n";
    out << "manifest = " << cfg.io.manifest_path << "\n";
    out << "crops_dir = " << cfg.io.crops_dir << "\n";
    out << "crop_suffix = " << cfg.io.crop_suffix << "\n";
    out << "emit_timings = " << (cfg.io.emit_timings ? "true" : "false") << "\n";
    out << "\n[cropper]\n";
    out << "threshold_offset = " << cfg.cropper.threshold_offset << "\n";
    out << "morph_radius = " << cfg.cropper.morph_radius << "\n";
    out << "rect_fill_ratio = " << format_number(cfg.cropper.rect_fill_ratio) << "\n";
    out << "enable_stage2 = " << (cfg.cropper.enable_stage2 ? "true" : "false") << "\n";
    out << "\n[filters]\n";
    out << "invalid_black_level = " << cfg.filters.invalid_black_level << "\n";
    out << "invalid_threshold = " << format_number(cfg.filters.invalid_threshold) << "\n";
    out << "color_area_threshold = " << format_number(cfg.filters.color_area_threshold) << "\n";
    out << "indicator_dilate_radius = " << cfg.filters.indicator_dilate_radius << "\n";
    out << "grayscale_tolerance = " << cfg.filters.grayscale_tolerance << "\n";
    out << "rect_min_side_fraction = " << format_number(cfg.filters.rect_min_side_fraction) << "\n";
    out << "span_fraction = " << format_number(cfg.filters.span_fraction) << "\n";
    out << "doppler_ranges = " << format_range_list(cfg.filters.doppler_ranges) << "\n";
    out << "indicator_ranges = " << format_range_list(cfg.filters.indicator_ranges) << "\n";
    out << "\n[calipers]\n";
    out << "border_mask_fraction = " << format_number(cfg.calipers.border_mask_fraction) << "\n";
    out << "box_min = " << cfg.calipers.box_min << "\n";
    out << "box_max = " << cfg.calipers.box_max << "\n";
    out << "dilate_radius = " << cfg.calipers.dilate_radius << "\n";
    out << "enhance_threshold = " << cfg.calipers.enhance_threshold << "\n";
    out << "method = " << to_string(cfg.calipers.method) << "\n";
    out << "hough_min_votes = " << cfg.calipers.hough_min_votes << "\n";
    out << "hough_min_len = " << cfg.calipers.hough_min_len << "\n";
    out << "hough_max_gap = " << cfg.calipers.hough_max_gap << "\n";
    out << "intersection_angle_min = " << format_number(cfg.calipers.intersection_angle_min) << "\n";
    out << "\n[dualview]\n";
    out << "width_height_min_ratio = " << format_number(cfg.dualview.width_height_min_ratio) << "\n";
    out << "midline_edge_min = " << cfg.dualview.midline_edge_min << "\n";
    out << "neighbor_margin = " << cfg.dualview.neighbor_margin << "\n";
    out << "neighbor_offset = " << cfg.dualview.neighbor_offset << "\n";
    out << "canny_lo = " << format_number(cfg.dualview.canny_lo) << "\n";
    out << "canny_hi = " << format_number(cfg.dualview.canny_hi) << "\n";
    out << "\n[textkx]\n";
    out << "backend = " << cfg.textkx.backend << "\n";
    out << "min_confidence = " << format_number(cfg.textkx.min_confidence) << "\n";
    if (!cfg.textkx.pattern_overrides.empty()) {
        out << "\n[textkx.patterns]\n";
        for (const auto& [cat, pats] : cfg.textkx.pattern_overrides)
            for (const auto& p : pats) out << cat << " = " << p << "\n";
    }
    return out.str();
}

std::string default_config_text() {
    std::string header =
        "# Batch curation pipeline configuration. Every key below shows its\n"
        "# default; delete or edit freely, unknown keys are rejected.\n"
        "#\n"
        "# HSV ranges are written hue_lo-hue_hi:sat_lo-sat_hi:val_lo-val_hi with\n"
        "# hue in [0, 360) (lo > hi wraps through red) and sat/val in [0, 1],\n"
        "# e.g. 345-15:0.45-1:0.35-1. Lists are comma separated; an empty list\n"
        "# keeps the built-in palette.\n"
        "#\n"
        "# [textkx.patterns] accepts one 'category = regex' line per pattern\n"
        "# (uppercase ECMAScript). The first line for a category replaces its\n"
        "# defaults, further lines append. Categories: left, right, antiradial,\n"
        "# radial, transverse, sagittal, longitudinal, oblique, clock, distance,\n"
        "# measurement, axilla, procedural. A clock override must capture hour\n"
        "# in group 1 and minute in group 2; a distance override must capture\n"
        "# the numeric value in group 1 and the unit in group 3.\n"
        "\n";
    return header + format_config(PipelineConfig{});
}

void validate_config(const PipelineConfig& cfg) {
    const auto& t = cfg.stages;
    if (!(t.crop || t.filters || t.dualview || t.calipers || t.textkx))
        throw ConfigError("at least one pipeline stage must be enabled");
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    if (cfg.textkx.min_confidence < 0 || cfg.textkx.min_confidence > 1)
        throw ConfigError("textkx.min_confidence must lie in [0, 1]");
    if (cfg.cropper.threshold_offset < 0 || cfg.cropper.threshold_offset > 255)
        throw ConfigError("cropper.threshold_offset must lie in [0, 255]");
    if (cfg.cropper.morph_radius < 0) throw ConfigError("cropper.morph_radius must be >= 0");
    if (cfg.cropper.rect_fill_ratio < 0 || cfg.cropper.rect_fill_ratio > 1)
        throw ConfigError("cropper.rect_fill_ratio must lie in [0, 1]");
    if (cfg.filters.invalid_black_level < 0 || cfg.filters.invalid_black_level > 256)
        throw ConfigError("filters.invalid_black_level must lie in [0, 256]");
    if (cfg.filters.invalid_threshold < 0 || cfg.filters.invalid_threshold > 1)
        throw ConfigError("filters.invalid_threshold must lie in [0, 1]");
    if (cfg.filters.color_area_threshold < 0 || cfg.filters.color_area_threshold > 1)
        throw ConfigError("filters.color_area_threshold must lie in [0, 1]");
    if (cfg.filters.grayscale_tolerance < 0)
        throw ConfigError("filters.grayscale_tolerance must be >= 0");
    if (cfg.filters.rect_min_side_fraction < 0 || cfg.filters.rect_min_side_fraction > 1)
        throw ConfigError("filters.rect_min_side_fraction must lie in [0, 1]");
    if (cfg.filters.span_fraction < 0 || cfg.filters.span_fraction > 1)
        throw ConfigError("filters.span_fraction must lie in [0, 1]");
    if (cfg.calipers.border_mask_fraction < 0 || cfg.calipers.border_mask_fraction >= 0.5)
        throw ConfigError("calipers.border_mask_fraction must lie in [0, 0.5)");
    if (cfg.calipers.box_min < 1 || cfg.calipers.box_max < cfg.calipers.box_min)
        throw ConfigError("calipers box range must satisfy 1 <= box_min <= box_max");
    if (cfg.calipers.dilate_radius < 0) throw ConfigError("calipers.dilate_radius must be >= 0");
    if (cfg.dualview.width_height_min_ratio <= 0)
        throw ConfigError("dualview.width_height_min_ratio must be > 0");
    if (cfg.dualview.neighbor_offset < 1)
        throw ConfigError("dualview.neighbor_offset must be >= 1");
    if (cfg.dualview.canny_lo < 0 || cfg.dualview.canny_hi < cfg.dualview.canny_lo)
        throw ConfigError("dualview canny thresholds must satisfy 0 <= lo <= hi");
    if (cfg.textkx.backend != "builtin" && cfg.textkx.backend != "none" &&
        cfg.textkx.backend.rfind("command:", 0) != 0)
        throw ConfigError("textkx.backend must be builtin, none, or command:<cmd>");
    if (cfg.textkx.backend.rfind("command:", 0) == 0 &&
        trim(cfg.textkx.backend.substr(8)).empty())
        throw ConfigError("textkx.backend command is empty");
}

}  // namespace sonoscrub
