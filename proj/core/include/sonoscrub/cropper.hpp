#ifndef SONOSCRUB_CROPPER_HPP
#define SONOSCRUB_CROPPER_HPP

#include <string>

#include "sonoscrub/types.hpp"

namespace sonoscrub {

struct CropConfig {
    int threshold_offset = 10;     // foreground = gray > mode + offset
    int morph_radius = 2;          // opening radius applied to the mask
    double rect_fill_ratio = 0.98; // at or above: the scan area is a rectangle
    bool enable_stage2 = true;
    bool operator==(const CropConfig&) const = default;
};

enum class ScanShape { RECTANGULAR, REFINED };

const char* to_string(ScanShape s);
ScanShape scan_shape_from_string(const std::string& s);

struct Stage1Result {
    BoundingBox box;              // bbox of the largest foreground component
    BinaryMask mask;              // thresholded + opened foreground
    int mode_value = 0;           // histogram mode (ties -> smaller value)
    long long largest_pixels = 0; // 0 when the mask is empty
};

struct CropResult {
    BoundingBox stage1_box;
    BoundingBox final_box;
    ScanShape shape = ScanShape::RECTANGULAR;
    int mode_value = 0;
    bool operator==(const CropResult&) const = default;
};

// Threshold at mode+offset, open, keep the largest 8-connected component.
// An empty mask falls back to the full frame.
Stage1Result stage1_crop(const ScanImage& gray, const CropConfig& cfg);

// Slice-median refinement: the box rows are cut into thirds (boundaries at
// y_top + floor(h/3) and y_top + 2*floor(h/3), the last slice absorbs the
// remainder) and each slice contributes its leftmost/rightmost set pixel;
// the refined x bounds are the medians of those extremes (mean of the two
// middle values, floored, when a slice is empty and only two remain).
// Columns are treated symmetrically for the y bounds.
BoundingBox stage2_refine(const BinaryMask& mask, const BoundingBox& stage1_box);

// Full pipeline: stage 1, fill-ratio test, optional stage 2. Accepts gray or
// RGB input (RGB is converted internally).
CropResult crop_scan(const ScanImage& img, const CropConfig& cfg);

}  // namespace sonoscrub

#endif
