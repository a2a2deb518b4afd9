#include "sonoscrub/imgops.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>

namespace sonoscrub {

namespace {

void require_gray(const ScanImage& img, const char* who) {
    if (!img.valid() || img.channels != 1)
        throw ParameterError(std::string(who) + ": expects a valid grayscale image");
}

void require_valid(const ScanImage& img, const char* who) {
    if (!img.valid())
        throw ParameterError(std::string(who) + ": invalid image");
}

// Inclusive-prefix integral image of a mask; sums(x, y) = count of set
// pixels in [0,x) x [0,y).
std::vector<int> prefix_sums(const BinaryMask& m) {
    const int w = m.width, h = m.height;
    std::vector<int> s(static_cast<size_t>(w + 1) * (h + 1), 0);
    for (int y = 0; y < h; ++y) {
        int row = 0;
        for (int x = 0; x < w; ++x) {
            row += m.data[static_cast<size_t>(y) * w + x] ? 1 : 0;
            s[static_cast<size_t>(y + 1) * (w + 1) + (x + 1)] =
                s[static_cast<size_t>(y) * (w + 1) + (x + 1)] + row;
        }
    }
    return s;
}

int window_count(const std::vector<int>& s, int stride, int x0, int y0, int x1, int y1) {
    // half-open window [x0,x1) x [y0,y1), bounds already clipped
    return s[static_cast<size_t>(y1) * stride + x1] - s[static_cast<size_t>(y0) * stride + x1] -
           s[static_cast<size_t>(y1) * stride + x0] + s[static_cast<size_t>(y0) * stride + x0];
}

}  // namespace

ScanImage to_grayscale(const ScanImage& img) {
    require_valid(img, "to_grayscale");
    if (img.channels == 1) return img;
    ScanImage out = ScanImage::make(img.width, img.height, 1, 0, img.source_id);
    const std::uint8_t* src = img.data.data();
    std::uint8_t* dst = out.data.data();
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i) {
        const unsigned r = src[3 * i], g = src[3 * i + 1], b = src[3 * i + 2];
        dst[i] = static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
    }
    return out;
}

void rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8,
                double& h, double& s, double& v) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    v = mx;
    s = mx == 0.0 ? 0.0 : d / mx;
    if (d == 0.0) {
        h = 0.0;
        return;
    }
    if (mx == r)
        h = 60.0 * std::fmod((g - b) / d, 6.0);
    else if (mx == g)
        h = 60.0 * ((b - r) / d + 2.0);
    else
        h = 60.0 * ((r - g) / d + 4.0);
    if (h < 0.0) h += 360.0;
}

BinaryMask hsv_mask(const ScanImage& img, std::span<const HsvRange> ranges) {
    require_valid(img, "hsv_mask");
    if (img.channels != 3)
        throw ParameterError("hsv_mask: expects a 3-channel image");
    BinaryMask out = BinaryMask::make(img.width, img.height);
    if (ranges.empty()) return out;
    const std::uint8_t* src = img.data.data();
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i) {
        double h, s, v;
        rgb_to_hsv(src[3 * i], src[3 * i + 1], src[3 * i + 2], h, s, v);
        for (const HsvRange& r : ranges) {
            if (r.contains(h, s, v)) {
                out.data[i] = 1;
                break;
            }
        }
    }
    return out;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
    if (radius < 0) throw ParameterError("dilate: negative radius");
    if (radius == 0) return mask;
    const int w = mask.width, h = mask.height;
    const std::vector<int> s = prefix_sums(mask);
    BinaryMask out = BinaryMask::make(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius), y1 = std::min(h, y + radius + 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius), x1 = std::min(w, x + radius + 1);
            if (window_count(s, w + 1, x0, y0, x1, y1) > 0)
                out.data[static_cast<size_t>(y) * w + x] = 1;
        }
    }
    return out;
}

BinaryMask erode(const BinaryMask& mask, int radius) {
    if (radius < 0) throw ParameterError("erode: negative radius");
    if (radius == 0) return mask;
    const int w = mask.width, h = mask.height;
    const std::vector<int> s = prefix_sums(mask);
    BinaryMask out = BinaryMask::make(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius), y1 = std::min(h, y + radius + 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius), x1 = std::min(w, x + radius + 1);
            // outside the frame counts as set, so only in-bounds pixels matter
            const int area = (x1 - x0) * (y1 - y0);
            if (window_count(s, w + 1, x0, y0, x1, y1) == area)
                out.data[static_cast<size_t>(y) * w + x] = 1;
        }
    }
    return out;
}

std::vector<Component> connected_components(const BinaryMask& mask) {
    std::vector<int> labels;
    return connected_components(mask, labels);
}

std::vector<Component> connected_components(const BinaryMask& mask,
                                            std::vector<int>& labels) {
    const int w = mask.width, h = mask.height;
    labels.assign(static_cast<size_t>(w) * h, 0);
    std::vector<Component> comps;
    std::vector<Point> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (!mask.data[i] || labels[i]) continue;
            Component c;
            c.id = static_cast<int>(comps.size()) + 1;
            c.first_pixel = {x, y};
            c.bbox = {x, y, x + 1, y + 1};
            labels[i] = c.id;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                ++c.pixel_count;
                c.bbox.x_left = std::min(c.bbox.x_left, p.x);
                c.bbox.x_right = std::max(c.bbox.x_right, p.x + 1);
                c.bbox.y_top = std::min(c.bbox.y_top, p.y);
                c.bbox.y_bottom = std::max(c.bbox.y_bottom, p.y + 1);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = p.x + dx, ny = p.y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const size_t j = static_cast<size_t>(ny) * w + nx;
                        if (mask.data[j] && !labels[j]) {
                            labels[j] = c.id;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
            comps.push_back(c);
        }
    }
    std::stable_sort(comps.begin(), comps.end(),
                     [](const Component& a, const Component& b) {
                         return a.pixel_count > b.pixel_count;
                     });
    return comps;
}

namespace {

// clockwise on screen (y grows downward): E SE S SW W NW N NE
constexpr std::array<Point, 8> kDirs = {{{1, 0},
                                         {1, 1},
                                         {0, 1},
                                         {-1, 1},
                                         {-1, 0},
                                         {-1, -1},
                                         {0, -1},
                                         {1, -1}}};

int dir_between(Point from, Point to) {
    const int dx = to.x - from.x, dy = to.y - from.y;
    for (int d = 0; d < 8; ++d)
        if (kDirs[d].x == dx && kDirs[d].y == dy) return d;
    return -1;
}

std::vector<Point> moore_trace(const BinaryMask& mask, const std::vector<int>& labels,
                               int id, Point start, long long pixel_count) {
    const int w = mask.width, h = mask.height;
    auto is_set = [&](Point p) {
        return p.x >= 0 && p.x < w && p.y >= 0 && p.y < h &&
               labels[static_cast<size_t>(p.y) * w + p.x] == id;
    };
    std::vector<Point> ring{start};
    Point cur = start;
    int back = 4;  // raster-order start has a guaranteed unset west neighbour
    std::optional<Point> second;
    const long long cap = 4 * pixel_count + 16;
    for (long long step = 0; step < cap; ++step) {
        int found = -1;
        int last_bg = back;
        for (int i = 1; i <= 8; ++i) {
            const int d = (back + i) & 7;
            const Point q{cur.x + kDirs[d].x, cur.y + kDirs[d].y};
            if (is_set(q)) {
                found = d;
                break;
            }
            last_bg = d;
        }
        if (found < 0) break;  // isolated pixel
        const Point q{cur.x + kDirs[found].x, cur.y + kDirs[found].y};
        if (second && cur == start && q == *second) break;
        if (!second) second = q;
        ring.push_back(q);
        const Point bg{cur.x + kDirs[last_bg].x, cur.y + kDirs[last_bg].y};
        back = dir_between(q, bg);
        cur = q;
    }
    if (ring.size() > 1 && ring.back() == start) ring.pop_back();
    return ring;
}

}  // namespace

std::vector<Contour> find_contours(const BinaryMask& mask) {
    std::vector<int> labels;
    const std::vector<Component> comps = connected_components(mask, labels);
    std::vector<Contour> out;
    out.reserve(comps.size());
    for (const Component& c : comps) {
        Contour ct;
        ct.bbox = c.bbox;
        ct.pixel_count = c.pixel_count;
        ct.points = moore_trace(mask, labels, c.id, c.first_pixel, c.pixel_count);
        out.push_back(std::move(ct));
    }
    return out;
}

double polygon_perimeter(const std::vector<Point>& closed) {
    if (closed.size() < 2) return 0.0;
    double p = 0.0;
    for (size_t i = 0; i < closed.size(); ++i) {
        const Point& a = closed[i];
        const Point& b = closed[(i + 1) % closed.size()];
        p += std::hypot(a.x - b.x, a.y - b.y);
    }
    return p;
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double vv = vx * vx + vy * vy;
    if (vv == 0.0) return std::hypot(wx, wy);
    double t = (wx * vx + wy * vy) / vv;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(wx - t * vx, wy - t * vy);
}

void dp_simplify(const std::vector<Point>& pts, size_t lo, size_t hi, double eps,
                 std::vector<bool>& keep) {
    // keeps interior points of the open chain pts[lo..hi] farther than eps
    if (hi <= lo + 1) return;
    double best = -1.0;
    size_t best_i = lo;
    for (size_t i = lo + 1; i < hi; ++i) {
        const double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > best) {
            best = d;
            best_i = i;
        }
    }
    if (best > eps) {
        keep[best_i] = true;
        dp_simplify(pts, lo, best_i, eps, keep);
        dp_simplify(pts, best_i, hi, eps, keep);
    }
}

}  // namespace

std::vector<Point> approx_polygon(const std::vector<Point>& closed, double epsilon) {
    if (closed.size() < 3 || epsilon <= 0.0) return closed;
    // split the ring at the two mutually farthest vertices, simplify each arc
    size_t a = 0;
    double best = -1.0;
    for (size_t i = 1; i < closed.size(); ++i) {
        const double dx = closed[i].x - closed[0].x;
        const double dy = closed[i].y - closed[0].y;
        if (dx * dx + dy * dy > best) {
            best = dx * dx + dy * dy;
            a = i;
        }
    }
    size_t b = 0;
    best = -1.0;
    for (size_t i = 0; i < closed.size(); ++i) {
        const double dx = closed[i].x - closed[a].x;
        const double dy = closed[i].y - closed[a].y;
        if (dx * dx + dy * dy > best) {
            best = dx * dx + dy * dy;
            b = i;
        }
    }
    if (a == b) return {closed[a]};
    if (a > b) std::swap(a, b);
    // rotate so the ring starts at a; the split points are kept unconditionally
    const size_t n = closed.size();
    std::vector<Point> rot(n);
    for (size_t i = 0; i < n; ++i) rot[i] = closed[(a + i) % n];
    const size_t cut = b - a;
    std::vector<bool> keep(n, false);
    keep[0] = keep[cut] = true;
    dp_simplify(rot, 0, cut, epsilon, keep);
    // second arc wraps from cut back to 0; append the start to close it
    std::vector<Point> tail(rot.begin() + cut, rot.end());
    tail.push_back(rot[0]);
    std::vector<bool> keep_tail(tail.size(), false);
    dp_simplify(tail, 0, tail.size() - 1, epsilon, keep_tail);
    std::vector<Point> out;
    for (size_t i = 0; i <= cut; ++i)
        if (keep[i]) out.push_back(rot[i]);
    for (size_t i = 1; i + 1 < tail.size(); ++i)
        if (keep_tail[i]) out.push_back(tail[i]);
    return out;
}

namespace {

// classic 5x5 Gaussian, sigma ~1.4, normalized by 159
constexpr int kGauss[5][5] = {{2, 4, 5, 4, 2},
                              {4, 9, 12, 9, 4},
                              {5, 12, 15, 12, 5},
                              {4, 9, 12, 9, 4},
                              {2, 4, 5, 4, 2}};

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

BinaryMask canny_edges(const ScanImage& gray, double lo, double hi) {
    require_gray(gray, "canny_edges");
    if (lo < 0 || hi < lo) throw ParameterError("canny_edges: need 0 <= lo <= hi");
    const int w = gray.width, h = gray.height;
    const std::uint8_t* src = gray.data.data();
    auto px = [&](int x, int y) {
        return static_cast<int>(src[static_cast<size_t>(clampi(y, 0, h - 1)) * w +
                                    clampi(x, 0, w - 1)]);
    };
    // kept in units of 1/159 so equal gradients stay bit-identical and
    // two-column step plateaus survive the >= suppression test intact
    std::vector<double> smooth(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int acc = 0;
            for (int ky = -2; ky <= 2; ++ky)
                for (int kx = -2; kx <= 2; ++kx)
                    acc += kGauss[ky + 2][kx + 2] * px(x + kx, y + ky);
            smooth[static_cast<size_t>(y) * w + x] = acc;
        }
    }
    auto sm = [&](int x, int y) {
        return smooth[static_cast<size_t>(clampi(y, 0, h - 1)) * w + clampi(x, 0, w - 1)];
    };
    std::vector<double> gx(static_cast<size_t>(w) * h), gy(gx.size()), mag(gx.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double a = sm(x - 1, y - 1), b = sm(x, y - 1), c = sm(x + 1, y - 1);
            const double d = sm(x - 1, y), f = sm(x + 1, y);
            const double g = sm(x - 1, y + 1), i = sm(x, y + 1), j = sm(x + 1, y + 1);
            const size_t idx = static_cast<size_t>(y) * w + x;
            gx[idx] = (c + 2 * f + j) - (a + 2 * d + g);
            gy[idx] = (g + 2 * i + j) - (a + 2 * b + c);
            mag[idx] = std::hypot(gx[idx], gy[idx]) / 159.0;
        }
    }
    auto mg = [&](int x, int y) {
        if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;
        return mag[static_cast<size_t>(y) * w + x];
    };
    // tan(22.5 deg) and tan(67.5 deg) sector boundaries; comparisons are
    // symmetric in sign so a mirrored image yields the mirrored result
    constexpr double kT1 = 0.41421356237309503;
    constexpr double kT2 = 2.414213562373095;
    std::vector<std::uint8_t> cls(static_cast<size_t>(w) * h, 0);  // 0 none 1 weak 2 strong
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            const double m = mag[idx];
            if (m < lo) continue;
            const double ax = std::abs(gx[idx]), ay = std::abs(gy[idx]);
            double n1, n2;
            if (ay <= kT1 * ax) {  // horizontal gradient, vertical edge
                n1 = mg(x - 1, y);
                n2 = mg(x + 1, y);
            } else if (ay >= kT2 * ax) {
                n1 = mg(x, y - 1);
                n2 = mg(x, y + 1);
            } else if ((gx[idx] > 0) == (gy[idx] > 0)) {
                n1 = mg(x - 1, y - 1);
                n2 = mg(x + 1, y + 1);
            } else {
                n1 = mg(x + 1, y - 1);
                n2 = mg(x - 1, y + 1);
            }
            if (m >= n1 && m >= n2) cls[idx] = m >= hi ? 2 : 1;
        }
    }
    BinaryMask out = BinaryMask::make(w, h);
    std::vector<Point> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            if (cls[idx] != 2 || out.data[idx]) continue;
            out.data[idx] = 1;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx, ny = p.y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const size_t j = static_cast<size_t>(ny) * w + nx;
                        if (cls[j] != 0 && !out.data[j]) {
                            out.data[j] = 1;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
        }
    }
    return out;
}

namespace {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // unbiased-enough bounded draw for shuffling work queues
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

}  // namespace

std::vector<LineSegment> hough_lines(const BinaryMask& mask, int min_votes,
                                     int min_len, int max_gap) {
    if (min_votes < 1 || min_len < 1 || max_gap < 0)
        throw ParameterError("hough_lines: bad parameters");
    const int w = mask.width, h = mask.height;
    constexpr int kThetas = 180;
    const int rho_off = w + h;
    const int n_rho = 2 * rho_off + 1;
    std::array<double, kThetas> cos_t, sin_t;
    for (int t = 0; t < kThetas; ++t) {
        const double a = t * 3.14159265358979323846 / 180.0;
        cos_t[t] = std::cos(a);
        sin_t[t] = std::sin(a);
    }
    std::vector<int> acc(static_cast<size_t>(kThetas) * n_rho, 0);
    std::vector<std::uint8_t> live(mask.data);            // pixels still present
    std::vector<std::uint8_t> voted(live.size(), 0);      // pixels in the accumulator
    std::vector<Point> pts;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (live[static_cast<size_t>(y) * w + x]) pts.push_back({x, y});

    auto vote = [&](Point p, int delta) {
        for (int t = 0; t < kThetas; ++t) {
            const int r = static_cast<int>(std::lround(p.x * cos_t[t] + p.y * sin_t[t])) + rho_off;
            acc[static_cast<size_t>(t) * n_rho + r] += delta;
        }
    };

    std::vector<LineSegment> out;
    SplitMix64 rng(0x5EEDC0FFEE123457ull);
    size_t remaining = pts.size();
    while (remaining > 0) {
        const size_t pick = static_cast<size_t>(rng.below(remaining));
        const Point seed = pts[pick];
        pts[pick] = pts[--remaining];
        const size_t seed_idx = static_cast<size_t>(seed.y) * w + seed.x;
        if (!live[seed_idx]) continue;
        vote(seed, +1);
        voted[seed_idx] = 1;
        int best_t = 0, best_v = -1;
        for (int t = 0; t < kThetas; ++t) {
            const int r = static_cast<int>(std::lround(seed.x * cos_t[t] + seed.y * sin_t[t])) + rho_off;
            const int v = acc[static_cast<size_t>(t) * n_rho + r];
            if (v > best_v) {
                best_v = v;
                best_t = t;
            }
        }
        if (best_v < min_votes) continue;
        // walk along the line direction (-sin, cos), pixel-dominant stepping
        double dx = -sin_t[best_t], dy = cos_t[best_t];
        if (std::abs(dx) >= std::abs(dy)) {
            dy /= std::abs(dx);
            dx = dx > 0 ? 1.0 : -1.0;
        } else {
            dx /= std::abs(dy);
            dy = dy > 0 ? 1.0 : -1.0;
        }
        Point ends[2];
        for (int side = 0; side < 2; ++side) {
            const double sx = side ? -dx : dx, sy = side ? -dy : dy;
            double fx = seed.x, fy = seed.y;
            Point last = seed;
            int gap = 0;
            while (true) {
                fx += sx;
                fy += sy;
                const int ix = static_cast<int>(std::lround(fx));
                const int iy = static_cast<int>(std::lround(fy));
                if (ix < 0 || ix >= w || iy < 0 || iy >= h) break;
                if (live[static_cast<size_t>(iy) * w + ix]) {
                    last = {ix, iy};
                    gap = 0;
                } else if (++gap > max_gap) {
                    break;
                }
            }
            ends[side] = last;
        }
        const int len = std::max(std::abs(ends[0].x - ends[1].x),
                                 std::abs(ends[0].y - ends[1].y));
        const bool good = len >= min_len;
        // clear the walked pixels either way so the loop terminates
        for (int side = 0; side < 2; ++side) {
            const double sx = side ? -dx : dx, sy = side ? -dy : dy;
            double fx = seed.x, fy = seed.y;
            while (true) {
                const int ix = static_cast<int>(std::lround(fx));
                const int iy = static_cast<int>(std::lround(fy));
                const size_t j = static_cast<size_t>(iy) * w + ix;
                if (live[j]) {
                    if (voted[j]) {
                        vote({ix, iy}, -1);
                        voted[j] = 0;
                    }
                    live[j] = 0;
                }
                if (ix == ends[side].x && iy == ends[side].y) break;
                fx += sx;
                fy += sy;
            }
        }
        if (good) out.push_back({ends[0], ends[1]});
    }
    return out;
}

ScanImage edge_enhance(const ScanImage& gray) {
    require_gray(gray, "edge_enhance");
    const int w = gray.width, h = gray.height;
    const std::uint8_t* src = gray.data.data();
    auto px = [&](int x, int y) {
        return static_cast<int>(src[static_cast<size_t>(clampi(y, 0, h - 1)) * w +
                                    clampi(x, 0, w - 1)]);
    };
    std::vector<std::uint8_t> lap(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int acc = 8 * px(x, y);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (dx || dy) acc -= px(x + dx, y + dy);
            lap[static_cast<size_t>(y) * w + x] =
                static_cast<std::uint8_t>(clampi(acc, 0, 255));
        }
    }
    ScanImage out = ScanImage::make(w, h, 1, 0, gray.source_id);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t m = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int ny = y + dy;
                if (ny < 0 || ny >= h) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx;
                    if (nx < 0 || nx >= w) continue;
                    m = std::max(m, lap[static_cast<size_t>(ny) * w + nx]);
                }
            }
            out.data[static_cast<size_t>(y) * w + x] = m;
        }
    }
    return out;
}

}  // namespace sonoscrub
