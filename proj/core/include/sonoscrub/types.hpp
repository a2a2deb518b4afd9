#ifndef SONOSCRUB_TYPES_HPP
#define SONOSCRUB_TYPES_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sonoscrub {

// Error taxonomy. Everything user-facing throws one of these; callers that
// must not die (the batch pipeline) catch per image and record the failure.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : Error {       // unreadable / unsupported image file
    using Error::Error;
};
struct ParameterError : Error {    // bad argument or config value
    using Error::Error;
};
struct ConfigError : Error {       // fatal config / CLI problem (exit 1)
    using Error::Error;
};
struct BackendError : Error {      // OCR backend failed or protocol broken
    using Error::Error;
};
struct SpecError : Error {         // synthetic scene spec cannot be rendered
    using Error::Error;
};

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point&) const = default;
};

// Half-open box: pixel (x, y) is inside iff x_left <= x < x_right and
// y_top <= y < y_bottom.
struct BoundingBox {
    int x_left = 0;
    int y_top = 0;
    int x_right = 0;
    int y_bottom = 0;

    int width() const { return x_right - x_left; }
    int height() const { return y_bottom - y_top; }
    long long area() const { return static_cast<long long>(width()) * height(); }
    bool empty() const { return x_right <= x_left || y_bottom <= y_top; }
    bool contains(int x, int y) const {
        return x >= x_left && x < x_right && y >= y_top && y < y_bottom;
    }
    bool contains(const BoundingBox& o) const {
        return o.x_left >= x_left && o.x_right <= x_right &&
               o.y_top >= y_top && o.y_bottom <= y_bottom;
    }
    BoundingBox translated(int dx, int dy) const {
        return {x_left + dx, y_top + dy, x_right + dx, y_bottom + dy};
    }
    bool operator==(const BoundingBox&) const = default;
};

// Interleaved 8-bit raster, 1 (gray) or 3 (RGB) channels, row-major.
struct ScanImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;
    std::string source_id;

    static ScanImage make(int w, int h, int c, std::uint8_t fill = 0,
                          std::string id = {}) {
        if (w <= 0 || h <= 0 || (c != 1 && c != 3))
            throw ParameterError("ScanImage::make: bad dimensions " +
                                 std::to_string(w) + "x" + std::to_string(h) +
                                 "x" + std::to_string(c));
        ScanImage img;
        img.width = w;
        img.height = h;
        img.channels = c;
        img.data.assign(static_cast<size_t>(w) * h * c, fill);
        img.source_id = std::move(id);
        return img;
    }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    size_t index(int x, int y, int c = 0) const {
        return (static_cast<size_t>(y) * width + x) * channels + c;
    }
    std::uint8_t& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
    std::uint8_t at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }

    BoundingBox full_box() const { return {0, 0, width, height}; }

    bool valid() const {
        return width > 0 && height > 0 && (channels == 1 || channels == 3) &&
               data.size() == static_cast<size_t>(width) * height * channels;
    }

    ScanImage crop(const BoundingBox& box) const {
        if (box.empty() || !full_box().contains(box))
            throw ParameterError("ScanImage::crop: box out of bounds");
        ScanImage out = make(box.width(), box.height(), channels, 0, source_id);
        const size_t row_bytes = static_cast<size_t>(box.width()) * channels;
        for (int y = 0; y < box.height(); ++y) {
            const std::uint8_t* src = data.data() + index(box.x_left, box.y_top + y);
            std::copy(src, src + row_bytes, out.data.begin() + out.index(0, y));
        }
        return out;
    }
};

// One bit per pixel, stored as bytes 0/1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    static BinaryMask make(int w, int h, bool fill = false) {
        if (w <= 0 || h <= 0)
            throw ParameterError("BinaryMask::make: bad dimensions");
        BinaryMask m;
        m.width = w;
        m.height = h;
        m.data.assign(static_cast<size_t>(w) * h, fill ? 1 : 0);
        return m;
    }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    bool get(int x, int y) const {
        return data[static_cast<size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v = true) {
        data[static_cast<size_t>(y) * width + x] = v ? 1 : 0;
    }
    long long count() const {
        long long n = 0;
        for (std::uint8_t v : data) n += (v != 0);
        return n;
    }
    bool any() const {
        for (std::uint8_t v : data)
            if (v) return true;
        return false;
    }
    bool operator==(const BinaryMask&) const = default;
};

// Inclusive HSV interval. Hue in degrees [0, 360); hue_lo > hue_hi means the
// range wraps through 0 (e.g. 345..15 covers reds). Saturation and value are
// fractions in [0, 1], both bounds inclusive.
struct HsvRange {
    double hue_lo = 0.0;
    double hue_hi = 360.0;
    double sat_lo = 0.0;
    double sat_hi = 1.0;
    double val_lo = 0.0;
    double val_hi = 1.0;

    bool contains(double h, double s, double v) const {
        if (s < sat_lo || s > sat_hi || v < val_lo || v > val_hi) return false;
        if (hue_lo <= hue_hi) return h >= hue_lo && h <= hue_hi;
        return h >= hue_lo || h <= hue_hi;  // wraps through 0
    }

    bool operator==(const HsvRange&) const = default;
};

}  // namespace sonoscrub

#endif
