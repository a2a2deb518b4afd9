#ifndef SONOSCRUB_ARTIFACTS_HPP
#define SONOSCRUB_ARTIFACTS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sonoscrub/types.hpp"

namespace sonoscrub {

enum class CaliperMethod { CONTOUR, CONTOUR_PLUS_HOUGH };

const char* to_string(CaliperMethod m);
CaliperMethod caliper_method_from_string(const std::string& s);

struct CaliperConfig {
    double border_mask_fraction = 0.15;  // outer share of each dimension ignored
    int box_min = 10;                    // accepted contour bbox side range,
    int box_max = 70;                    // inclusive on both ends
    int dilate_radius = 1;               // applied to the binarized edge map
    int enhance_threshold = 127;         // edge_enhance output > this is "ink"
    CaliperMethod method = CaliperMethod::CONTOUR_PLUS_HOUGH;
    int hough_min_votes = 30;
    int hough_min_len = 25;
    int hough_max_gap = 8;
    double intersection_angle_min = 10.0;  // degrees between paired lines
    bool operator==(const CaliperConfig&) const = default;
};

struct CaliperReport {
    bool present = false;
    std::vector<BoundingBox> boxes;  // full-image coordinates
    CaliperMethod method_used = CaliperMethod::CONTOUR;
    bool operator==(const CaliperReport&) const = default;
};

// Two-step caliper-mark detector. The border region is cropped away, the
// interior is edge-enhanced, binarized and dilated, and contour bounding
// boxes with both sides in [box_min, box_max] are reported. When the method
// is CONTOUR_PLUS_HOUGH and no contour qualified, a probabilistic Hough pass
// looks for two non-parallel lines (angle >= intersection_angle_min) whose
// intersection lies in the interior; a hit is reported as a 1x1 box at the
// intersection point.
CaliperReport detect_calipers(const ScanImage& img, const CaliperConfig& cfg);

struct DualViewConfig {
    double width_height_min_ratio = 0.75;  // dual candidates are wide
    int midline_edge_min = 100;            // c(mid) must exceed this
    int neighbor_margin = 10;              // and the probes by this margin
    int neighbor_offset = 10;              // probe distance from the midline
    double canny_lo = 50.0;
    double canny_hi = 150.0;
    bool operator==(const DualViewConfig&) const = default;
};

struct DualViewResult {
    bool is_dual = false;
    std::optional<int> split_x;
    bool operator==(const DualViewResult&) const = default;
};

// Side-by-side dual-view detector: teal/green overlay gate, aspect-ratio
// gate, then the midline Canny column-count test. For even widths the count
// at x is taken as max(c(x-1), c(x)) at the midline and both probes, which
// keeps the verdict exactly mirror invariant. Images narrower than
// 2*neighbor_offset+1 are rejected with ParameterError.
DualViewResult detect_dual_view(const ScanImage& img, const DualViewConfig& cfg);

// Cuts at split_x (left keeps [0, split_x)); throws ParameterError unless
// 0 < split_x < width. Source ids gain ":left" / ":right" suffixes.
std::pair<ScanImage, ScanImage> split_dual_view(const ScanImage& img, int split_x);

}  // namespace sonoscrub

#endif
