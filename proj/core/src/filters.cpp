#include "sonoscrub/filters.hpp"

#include <cmath>

#include "sonoscrub/imgops.hpp"

namespace sonoscrub {

const char* to_string(FilterTrigger t) {
    switch (t) {
        case FilterTrigger::GRAY_PASS: return "gray_pass";
        case FilterTrigger::INDICATOR_SHAPE: return "indicator_shape";
        case FilterTrigger::COLOR_AREA: return "color_area";
        case FilterTrigger::NONE: break;
    }
    return "none";
}

FilterTrigger filter_trigger_from_string(const std::string& s) {
    if (s == "gray_pass") return FilterTrigger::GRAY_PASS;
    if (s == "indicator_shape") return FilterTrigger::INDICATOR_SHAPE;
    if (s == "color_area") return FilterTrigger::COLOR_AREA;
    if (s == "none") return FilterTrigger::NONE;
    throw ParameterError("unknown filter trigger: " + s);
}

std::vector<HsvRange> default_doppler_ranges() {
    return {
        {345.0, 15.0, 0.45, 1.0, 0.35, 1.0},   // red, wraps through 0
        {15.0, 45.0, 0.45, 1.0, 0.35, 1.0},    // orange
        {45.0, 70.0, 0.45, 1.0, 0.35, 1.0},    // yellow
        {70.0, 160.0, 0.30, 1.0, 0.30, 1.0},   // green
        {190.0, 260.0, 0.45, 1.0, 0.35, 1.0},  // blue
    };
}

std::vector<HsvRange> default_indicator_ranges() {
    return {
        {70.0, 160.0, 0.25, 1.0, 0.40, 1.0},  // overlay green
        {0.0, 360.0, 0.0, 0.10, 0.90, 1.0},   // near white
    };
}

FilterVerdict detect_invalid(const ScanImage& img, const FilterConfig& cfg,
                             const std::optional<BoundingBox>& scan_area) {
    if (!img.valid()) throw ParameterError("detect_invalid: invalid image");
    BoundingBox box = scan_area.value_or(img.full_box());
    if (box.empty() || !img.full_box().contains(box))
        throw ParameterError("detect_invalid: scan_area out of bounds");
    const ScanImage gray = to_grayscale(img);
    long long black = 0;
    for (int y = box.y_top; y < box.y_bottom; ++y)
        for (int x = box.x_left; x < box.x_right; ++x)
            if (gray.at(x, y) < cfg.invalid_black_level) ++black;
    FilterVerdict v;
    v.black_fraction = static_cast<double>(black) / static_cast<double>(box.area());
    v.invalid = v.black_fraction > cfg.invalid_threshold;
    return v;
}

namespace {

struct AxisLine {
    int lo_x, hi_x, lo_y, hi_y;
    bool horizontal;
};

bool axis_aligned(const LineSegment& s, AxisLine& out) {
    const int ex = std::abs(s.p1.x - s.p0.x) + 1;
    const int ey = std::abs(s.p1.y - s.p0.y) + 1;
    out.lo_x = std::min(s.p0.x, s.p1.x);
    out.hi_x = std::max(s.p0.x, s.p1.x);
    out.lo_y = std::min(s.p0.y, s.p1.y);
    out.hi_y = std::max(s.p0.y, s.p1.y);
    if (ey <= std::max(2, ex / 10)) {
        out.horizontal = true;
        return true;
    }
    if (ex <= std::max(2, ey / 10)) {
        out.horizontal = false;
        return true;
    }
    return false;
}

bool endpoints_close(const LineSegment& a, const LineSegment& b, double limit) {
    for (const Point& p : {a.p0, a.p1})
        for (const Point& q : {b.p0, b.p1})
            if (std::hypot(p.x - q.x, p.y - q.y) <= limit) return true;
    return false;
}

}  // namespace

bool detect_indicator_shape(const BinaryMask& mask, const FilterConfig& cfg) {
    if (!mask.any()) return false;
    const int w = mask.width, h = mask.height;
    const double min_w = cfg.rect_min_side_fraction * w;
    const double min_h = cfg.rect_min_side_fraction * h;

    // rectangle: contour simplifies to exactly 4 corners, big enough box
    for (const Contour& c : find_contours(mask)) {
        if (c.bbox.width() < min_w || c.bbox.height() < min_h) continue;
        if (c.points.size() < 8) continue;
        const double per = polygon_perimeter(c.points);
        if (approx_polygon(c.points, 0.02 * per).size() == 4) return true;
    }

    const int min_len = std::max(8, static_cast<int>(std::lround(
                                        cfg.rect_min_side_fraction * std::min(w, h))));
    const std::vector<LineSegment> segs = hough_lines(mask, min_len, min_len, 4);
    std::vector<std::pair<LineSegment, AxisLine>> hs, vs;
    for (const LineSegment& s : segs) {
        const int ex = std::abs(s.p1.x - s.p0.x) + 1;
        const int ey = std::abs(s.p1.y - s.p0.y) + 1;
        // single spanning line across either dimension
        if (ex >= cfg.span_fraction * w || ey >= cfg.span_fraction * h) return true;
        AxisLine ax;
        if (!axis_aligned(s, ax)) continue;
        if (ax.horizontal && ex >= min_w) hs.push_back({s, ax});
        if (!ax.horizontal && ey >= min_h) vs.push_back({s, ax});
    }
    // two sides of a right angle within 15 px of each other
    for (const auto& [sh, axh] : hs)
        for (const auto& [sv, axv] : vs)
            if (endpoints_close(sh, sv, 15.0)) return true;
    return false;
}

FilterVerdict detect_non_b_mode(const ScanImage& img, const FilterConfig& cfg) {
    if (!img.valid()) throw ParameterError("detect_non_b_mode: invalid image");
    FilterVerdict v;
    if (img.channels == 1) {
        v.trigger = FilterTrigger::GRAY_PASS;
        return v;
    }
    const size_t n = static_cast<size_t>(img.width) * img.height;
    size_t grayish = 0;
    for (size_t i = 0; i < n; ++i) {
        const std::uint8_t r = img.data[3 * i], g = img.data[3 * i + 1],
                           b = img.data[3 * i + 2];
        const int mx = std::max({r, g, b}), mn = std::min({r, g, b});
        if (mx - mn <= cfg.grayscale_tolerance) ++grayish;
    }
    if (static_cast<double>(grayish) >= 0.999 * static_cast<double>(n)) {
        v.trigger = FilterTrigger::GRAY_PASS;
        return v;
    }

    const std::vector<HsvRange> doppler =
        cfg.doppler_ranges.empty() ? default_doppler_ranges() : cfg.doppler_ranges;
    const std::vector<HsvRange> indicator =
        cfg.indicator_ranges.empty() ? default_indicator_ranges() : cfg.indicator_ranges;

    const BinaryMask color = hsv_mask(img, doppler);
    v.color_fraction = static_cast<double>(color.count()) / static_cast<double>(n);

    const BinaryMask ind =
        dilate(hsv_mask(img, indicator), cfg.indicator_dilate_radius);
    if (detect_indicator_shape(ind, cfg)) {
        v.non_b_mode = true;
        v.trigger = FilterTrigger::INDICATOR_SHAPE;
        return v;
    }
    if (v.color_fraction > cfg.color_area_threshold) {
        v.non_b_mode = true;
        v.trigger = FilterTrigger::COLOR_AREA;
    }
    return v;
}

}  // namespace sonoscrub
