#include "sonoscrub/artifacts.hpp"

#include <cmath>

#include "sonoscrub/filters.hpp"
#include "sonoscrub/imgops.hpp"

namespace sonoscrub {

const char* to_string(CaliperMethod m) {
    return m == CaliperMethod::CONTOUR_PLUS_HOUGH ? "contour_plus_hough" : "contour";
}

CaliperMethod caliper_method_from_string(const std::string& s) {
    if (s == "contour") return CaliperMethod::CONTOUR;
    if (s == "contour_plus_hough") return CaliperMethod::CONTOUR_PLUS_HOUGH;
    throw ParameterError("unknown caliper method: " + s);
}

namespace {

double segment_angle_deg(const LineSegment& s) {
    double a = std::atan2(static_cast<double>(s.p1.y - s.p0.y),
                          static_cast<double>(s.p1.x - s.p0.x)) * 180.0 / 3.14159265358979323846;
    if (a < 0) a += 180.0;
    if (a >= 180.0) a -= 180.0;
    return a;
}

double angle_between_deg(double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 180.0 - d);
}

// intersection of the infinite supporting lines; false when near parallel
bool line_intersection(const LineSegment& a, const LineSegment& b, double& xi,
                       double& yi) {
    const double d1x = a.p1.x - a.p0.x, d1y = a.p1.y - a.p0.y;
    const double d2x = b.p1.x - b.p0.x, d2y = b.p1.y - b.p0.y;
    const double denom = d1x * d2y - d1y * d2x;
    if (std::abs(denom) < 1e-9) return false;
    const double t = ((b.p0.x - a.p0.x) * d2y - (b.p0.y - a.p0.y) * d2x) / denom;
    xi = a.p0.x + t * d1x;
    yi = a.p0.y + t * d1y;
    return true;
}

}  // namespace

CaliperReport detect_calipers(const ScanImage& img, const CaliperConfig& cfg) {
    if (!img.valid()) throw ParameterError("detect_calipers: invalid image");
    if (cfg.border_mask_fraction < 0.0 || cfg.border_mask_fraction >= 0.5)
        throw ParameterError("detect_calipers: border_mask_fraction must be in [0, 0.5)");
    CaliperReport report;
    report.method_used = CaliperMethod::CONTOUR;
    const int w = img.width, h = img.height;
    const int bx = static_cast<int>(cfg.border_mask_fraction * w);
    const int by = static_cast<int>(cfg.border_mask_fraction * h);
    const BoundingBox interior{bx, by, w - bx, h - by};
    if (interior.empty()) return report;

    const ScanImage sub = to_grayscale(img).crop(interior);
    const ScanImage enhanced = edge_enhance(sub);
    BinaryMask ink = BinaryMask::make(sub.width, sub.height);
    for (size_t i = 0; i < enhanced.data.size(); ++i)
        if (enhanced.data[i] > cfg.enhance_threshold) ink.data[i] = 1;
    ink = dilate(ink, cfg.dilate_radius);

    for (const Contour& c : find_contours(ink)) {
        const int cw = c.bbox.width(), ch = c.bbox.height();
        if (cw >= cfg.box_min && cw <= cfg.box_max && ch >= cfg.box_min &&
            ch <= cfg.box_max)
            report.boxes.push_back(c.bbox.translated(bx, by));
    }
    if (!report.boxes.empty()) {
        report.present = true;
        return report;
    }
    if (cfg.method != CaliperMethod::CONTOUR_PLUS_HOUGH) return report;

    const std::vector<LineSegment> segs =
        hough_lines(ink, cfg.hough_min_votes, cfg.hough_min_len, cfg.hough_max_gap);
    for (size_t i = 0; i < segs.size(); ++i) {
        const double ai = segment_angle_deg(segs[i]);
        for (size_t j = i + 1; j < segs.size(); ++j) {
            if (angle_between_deg(ai, segment_angle_deg(segs[j])) <
                cfg.intersection_angle_min)
                continue;
            double xi, yi;
            if (!line_intersection(segs[i], segs[j], xi, yi)) continue;
            const int px = static_cast<int>(std::lround(xi));
            const int py = static_cast<int>(std::lround(yi));
            if (px < 0 || px >= sub.width || py < 0 || py >= sub.height) continue;
            report.present = true;
            report.method_used = CaliperMethod::CONTOUR_PLUS_HOUGH;
            report.boxes.push_back(
                BoundingBox{bx + px, by + py, bx + px + 1, by + py + 1});
            return report;
        }
    }
    return report;
}

namespace {

std::vector<int> edge_column_counts(const BinaryMask& edges) {
    std::vector<int> counts(edges.width, 0);
    for (int y = 0; y < edges.height; ++y)
        for (int x = 0; x < edges.width; ++x)
            if (edges.get(x, y)) ++counts[x];
    return counts;
}

}  // namespace

DualViewResult detect_dual_view(const ScanImage& img, const DualViewConfig& cfg) {
    if (!img.valid()) throw ParameterError("detect_dual_view: invalid image");
    const int w = img.width, h = img.height;
    if (w < 2 * cfg.neighbor_offset + 1)
        throw ParameterError("detect_dual_view: image narrower than the probe span");

    DualViewResult result;
    if (img.channels == 3) {
        // teal/green overlays confuse the midline test: bail out when one is
        // shaped like an indicator
        const HsvRange teal_green{70.0, 200.0, 0.25, 1.0, 0.30, 1.0};
        const BinaryMask overlay =
            dilate(hsv_mask(img, std::span<const HsvRange>(&teal_green, 1)), 2);
        if (detect_indicator_shape(overlay, FilterConfig{})) return result;
    }
    if (static_cast<double>(w) < cfg.width_height_min_ratio * static_cast<double>(h))
        return result;

    const BinaryMask edges = canny_edges(to_grayscale(img), cfg.canny_lo, cfg.canny_hi);
    const std::vector<int> counts = edge_column_counts(edges);
    const bool even = (w % 2 == 0);
    auto effective = [&](int x) {
        if (even && x >= 1) return std::max(counts[x - 1], counts[x]);
        return counts[x];
    };
    const int mid = w / 2;
    const int c_mid = effective(mid);
    const int c_left = effective(mid - cfg.neighbor_offset);
    const int c_right = effective(mid + cfg.neighbor_offset);
    if (c_mid > cfg.midline_edge_min && c_mid > cfg.neighbor_margin + c_left &&
        c_mid > cfg.neighbor_margin + c_right) {
        result.is_dual = true;
        result.split_x = mid;
    }
    return result;
}

std::pair<ScanImage, ScanImage> split_dual_view(const ScanImage& img, int split_x) {
    if (!img.valid()) throw ParameterError("split_dual_view: invalid image");
    if (split_x <= 0 || split_x >= img.width)
        throw ParameterError("split_dual_view: split outside the image");
    ScanImage left = img.crop({0, 0, split_x, img.height});
    ScanImage right = img.crop({split_x, 0, img.width, img.height});
    left.source_id = img.source_id + ":left";
    right.source_id = img.source_id + ":right";
    return {std::move(left), std::move(right)};
}

}  // namespace sonoscrub
