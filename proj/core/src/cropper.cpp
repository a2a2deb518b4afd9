#include "sonoscrub/cropper.hpp"

#include <algorithm>
#include <array>

#include "sonoscrub/imgops.hpp"

namespace sonoscrub {

const char* to_string(ScanShape s) {
    return s == ScanShape::REFINED ? "refined" : "rectangular";
}

ScanShape scan_shape_from_string(const std::string& s) {
    if (s == "refined") return ScanShape::REFINED;
    if (s == "rectangular") return ScanShape::RECTANGULAR;
    throw ParameterError("unknown scan shape: " + s);
}

Stage1Result stage1_crop(const ScanImage& gray, const CropConfig& cfg) {
    if (!gray.valid() || gray.channels != 1)
        throw ParameterError("stage1_crop: expects grayscale input");
    if (cfg.threshold_offset < 0 || cfg.morph_radius < 0)
        throw ParameterError("stage1_crop: negative config value");
    std::array<long long, 256> hist{};
    for (std::uint8_t v : gray.data) ++hist[v];
    int mode = 0;
    for (int v = 1; v < 256; ++v)
        if (hist[v] > hist[mode]) mode = v;  // strict >: ties keep the smaller

    const int thresh = std::min(255, mode + cfg.threshold_offset);
    BinaryMask mask = BinaryMask::make(gray.width, gray.height);
    for (size_t i = 0; i < gray.data.size(); ++i)
        if (gray.data[i] > thresh) mask.data[i] = 1;
    mask = dilate(erode(mask, cfg.morph_radius), cfg.morph_radius);

    Stage1Result r;
    r.mode_value = mode;
    r.mask = std::move(mask);
    const auto comps = connected_components(r.mask);
    if (comps.empty()) {
        r.box = gray.full_box();
        r.largest_pixels = 0;
    } else {
        r.box = comps[0].bbox;
        r.largest_pixels = comps[0].pixel_count;
    }
    return r;
}

namespace {

int median_floor(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2;
}

struct SliceExtremes {
    std::vector<int> lows, highs;
};

// cuts [lo, hi) orthogonal to `axis_is_rows` into thirds and collects the
// min/max coordinate of set pixels along the other axis per slice
SliceExtremes slice_scan(const BinaryMask& mask, const BoundingBox& box, bool rows) {
    const int lo = rows ? box.y_top : box.x_left;
    const int hi = rows ? box.y_bottom : box.x_right;
    const int third = (hi - lo) / 3;
    const std::array<std::pair<int, int>, 3> slices = {{{lo, lo + third},
                                                        {lo + third, lo + 2 * third},
                                                        {lo + 2 * third, hi}}};
    SliceExtremes out;
    for (const auto& [s0, s1] : slices) {
        int mn = -1, mx = -1;
        for (int a = s0; a < s1; ++a) {
            const int b0 = rows ? box.x_left : box.y_top;
            const int b1 = rows ? box.x_right : box.y_bottom;
            for (int b = b0; b < b1; ++b) {
                const bool on = rows ? mask.get(b, a) : mask.get(a, b);
                if (!on) continue;
                if (mn < 0 || b < mn) mn = b;
                if (b > mx) mx = b;
            }
        }
        if (mn >= 0) {  // empty slices are dropped
            out.lows.push_back(mn);
            out.highs.push_back(mx);
        }
    }
    return out;
}

}  // namespace

BoundingBox stage2_refine(const BinaryMask& mask, const BoundingBox& stage1_box) {
    if (stage1_box.empty() ||
        !BoundingBox{0, 0, mask.width, mask.height}.contains(stage1_box))
        throw ParameterError("stage2_refine: box out of bounds");
    BoundingBox out = stage1_box;
    const SliceExtremes xs = slice_scan(mask, stage1_box, true);
    if (!xs.lows.empty()) {
        out.x_left = median_floor(xs.lows);
        out.x_right = median_floor(xs.highs) + 1;
    }
    const SliceExtremes ys = slice_scan(mask, stage1_box, false);
    if (!ys.lows.empty()) {
        out.y_top = median_floor(ys.lows);
        out.y_bottom = median_floor(ys.highs) + 1;
    }
    out.x_left = std::max(out.x_left, stage1_box.x_left);
    out.y_top = std::max(out.y_top, stage1_box.y_top);
    out.x_right = std::min(out.x_right, stage1_box.x_right);
    out.y_bottom = std::min(out.y_bottom, stage1_box.y_bottom);
    return out;
}

CropResult crop_scan(const ScanImage& img, const CropConfig& cfg) {
    const ScanImage gray = to_grayscale(img);
    const Stage1Result s1 = stage1_crop(gray, cfg);
    CropResult r;
    r.mode_value = s1.mode_value;
    r.stage1_box = s1.box;
    r.final_box = s1.box;
    if (s1.largest_pixels == 0) return r;  // nothing bright: keep the frame
    const double fill =
        static_cast<double>(s1.largest_pixels) / static_cast<double>(s1.box.area());
    if (fill >= cfg.rect_fill_ratio || !cfg.enable_stage2) return r;
    r.shape = ScanShape::REFINED;
    r.final_box = stage2_refine(s1.mask, s1.box);
    return r;
}

}  // namespace sonoscrub
