#ifndef SONOSCRUB_FILTERS_HPP
#define SONOSCRUB_FILTERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "sonoscrub/types.hpp"

namespace sonoscrub {

// What fired inside detect_non_b_mode. GRAY_PASS means the cheap grayscale
// gate decided the image is plain B-mode; INDICATOR_SHAPE and COLOR_AREA are
// the two non-B-mode evidence paths.
enum class FilterTrigger { NONE, GRAY_PASS, INDICATOR_SHAPE, COLOR_AREA };

const char* to_string(FilterTrigger t);
FilterTrigger filter_trigger_from_string(const std::string& s);

struct FilterVerdict {
    bool invalid = false;
    bool non_b_mode = false;
    double black_fraction = 0.0;  // share of pixels darker than the black level
    double color_fraction = 0.0;  // share of pixels inside the doppler ranges
    FilterTrigger trigger = FilterTrigger::NONE;
    bool operator==(const FilterVerdict&) const = default;
};

struct FilterConfig {
    int invalid_black_level = 5;        // gray < level counts as black
    double invalid_threshold = 0.75;    // invalid when black fraction exceeds this
    double color_area_threshold = 0.005;
    int indicator_dilate_radius = 2;
    int grayscale_tolerance = 8;        // per-pixel channel spread for the gray gate
    double rect_min_side_fraction = 0.05;
    double span_fraction = 0.6;
    std::vector<HsvRange> doppler_ranges;    // empty = defaults
    std::vector<HsvRange> indicator_ranges;  // empty = defaults
    bool operator==(const FilterConfig&) const = default;
};

// Color-flow / doppler palette: red, orange, yellow, green, blue bands.
std::vector<HsvRange> default_doppler_ranges();
// Overlay indicator palette: saturated greens plus near-white.
std::vector<HsvRange> default_indicator_ranges();

// Invalid-scan rule: the image (or the scan_area sub-box when given) is
// invalid when more than invalid_threshold of its pixels are black, i.e.
// gray value strictly below invalid_black_level.
FilterVerdict detect_invalid(const ScanImage& img, const FilterConfig& cfg,
                             const std::optional<BoundingBox>& scan_area = {});

// Non-B-mode detection, four steps: grayscale gate, HSV masking, indicator
// shape test on the dilated indicator mask, doppler color-area test.
FilterVerdict detect_non_b_mode(const ScanImage& img, const FilterConfig& cfg);

// Shape test used by step three: true when the mask contains a rectangle
// with both sides >= rect_min_side_fraction of the image dimensions, a
// horizontal+vertical line pair forming a right angle within 15 px, or one
// line spanning >= span_fraction of either dimension.
bool detect_indicator_shape(const BinaryMask& mask, const FilterConfig& cfg);

}  // namespace sonoscrub

#endif
