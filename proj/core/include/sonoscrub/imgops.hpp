#ifndef SONOSCRUB_IMGOPS_HPP
#define SONOSCRUB_IMGOPS_HPP

#include <span>
#include <vector>

#include "sonoscrub/types.hpp"

namespace sonoscrub {

// Integer luma: (299 r + 587 g + 114 b + 500) / 1000. Grayscale input is
// returned as a copy; the op is idempotent.
ScanImage to_grayscale(const ScanImage& img);

// Pixel h/s/v for one RGB pixel; h in degrees [0, 360), s and v in [0, 1].
void rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                double& h, double& s, double& v);

// Mask of pixels falling in any of the given HSV ranges. Grayscale images
// throw ParameterError (saturation is undefined for them in this toolkit).
BinaryMask hsv_mask(const ScanImage& img, std::span<const HsvRange> ranges);

// Square structuring element of side 2*radius+1. radius 0 is the identity.
// Out-of-bounds neighbourhood is treated as unset for dilate and as set for
// erode, so erode(dilate(m, r), r) always covers m.
BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask erode(const BinaryMask& mask, int radius);

struct Component {
    int id = 0;                 // 1-based discovery (raster) order
    long long pixel_count = 0;
    BoundingBox bbox;
    Point first_pixel;          // first set pixel in raster order
};

// 8-connected components, sorted by pixel_count descending; ties keep
// discovery order. `labels`, when given, receives the component id per pixel
// (0 = background) and must be empty or pre-sized w*h.
std::vector<Component> connected_components(const BinaryMask& mask);
std::vector<Component> connected_components(const BinaryMask& mask,
                                            std::vector<int>& labels);

struct Contour {
    std::vector<Point> points;  // closed boundary, clockwise, no repeated tail
    BoundingBox bbox;           // tight box of the whole component
    long long pixel_count = 0;  // area of the component, in pixels
};

// Outer boundary of every 8-connected component (Moore neighbour tracing),
// one contour per component, ordered like connected_components.
std::vector<Contour> find_contours(const BinaryMask& mask);

// Closed-polygon simplification (Douglas-Peucker both halves between the two
// mutually farthest points). epsilon in pixels.
std::vector<Point> approx_polygon(const std::vector<Point>& closed, double epsilon);

double polygon_perimeter(const std::vector<Point>& closed);

// Canny: 5x5 Gaussian (sigma 1.4), 3x3 Sobel, 4-sector non-maximum
// suppression, hysteresis between lo and hi on the raw L2 gradient
// magnitude. Every returned pixel has magnitude >= lo. Accepts grayscale
// input only.
BinaryMask canny_edges(const ScanImage& gray, double lo, double hi);

struct LineSegment {
    Point p0;
    Point p1;
};

// Progressive probabilistic Hough over a binary mask. 1 degree x 1 pixel
// resolution. Deterministic: internal fixed-seed RNG, identical output for
// identical input. Segments shorter than min_len (Chebyshev) are dropped;
// gaps up to max_gap pixels are bridged.
std::vector<LineSegment> hough_lines(const BinaryMask& mask, int min_votes,
                                     int min_len, int max_gap);

// 3x3 Laplacian sharpen response (center 8, neighbours -1, replicate border,
// clamped to [0,255]) followed by a 3x3 maximum filter. Grayscale only.
ScanImage edge_enhance(const ScanImage& gray);

}  // namespace sonoscrub

#endif
