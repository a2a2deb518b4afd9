#include "sonoscrub/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "sonoscrub/font.hpp"

namespace sonoscrub {

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
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
    SplitMix64 r(a ^ (b * 0x9E3779B97F4A7C15ull) ^ 0x5EEDC0FFEE123457ull);
    return r.next();
}

// seeded value noise in [-1, 1], 8 px lattice, smoothstep interpolation
double lattice(std::uint64_t seed, int gx, int gy) {
    std::uint64_t h = hash_mix(seed, (static_cast<std::uint64_t>(gx) << 32) ^
                                         static_cast<std::uint32_t>(gy));
    return static_cast<double>(h >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

double value_noise(std::uint64_t seed, int x, int y) {
    const int cell = 8;
    const int gx = x / cell, gy = y / cell;
    const double fx = static_cast<double>(x % cell) / cell;
    const double fy = static_cast<double>(y % cell) / cell;
    const double ux = fx * fx * (3 - 2 * fx), uy = fy * fy * (3 - 2 * fy);
    const double a = lattice(seed, gx, gy), b = lattice(seed, gx + 1, gy);
    const double c = lattice(seed, gx, gy + 1), d = lattice(seed, gx + 1, gy + 1);
    return (a * (1 - ux) + b * ux) * (1 - uy) + (c * (1 - ux) + d * ux) * uy;
}

struct ScanArea {
    BinaryMask mask;
    BoundingBox box;
};

ScanArea make_scan_area(SplitMix64& rng, int w, int h, SceneShape shape, bool symmetric) {
    int ml = rng.range(28, 47), mr = rng.range(28, 47);
    const int mt = rng.range(26, 43), mb = rng.range(26, 43);
    if (symmetric) mr = ml;  // dual seams need the tissue centered on the canvas
    const int x0 = ml, x1 = w - mr, y0 = mt, y1 = h - mb;
    const int sw = x1 - x0, sh = y1 - y0;
    ScanArea area{BinaryMask::make(w, h), {}};
    auto row = [&](int y, int lo, int hi) {
        lo = std::max(lo, 0);
        hi = std::min(hi, w);
        for (int x = lo; x < hi; ++x) area.mask.set(x, y, true);
    };
    switch (shape) {
        case SceneShape::RECTANGULAR:
            for (int y = y0; y < y1; ++y) row(y, x0, x1);
            break;
        case SceneShape::CONVEX: {
            // flat top, truncated elliptical dome below; the truncation keeps
            // the curved boundary within the outer 15% of the refined crop so
            // boundary arcs cannot masquerade as caliper-sized contours
            const double cx = (x0 + x1) / 2.0, half = sw / 2.0;
            const double trunc = rng.range(45, 60) / 100.0;
            for (int y = y0; y < y1; ++y) {
                const double t = trunc * (y - y0) / sh;
                const double a = half * std::sqrt(std::max(0.0, 1.0 - t * t));
                row(y, static_cast<int>(std::ceil(cx - a)), static_cast<int>(std::floor(cx + a)) + 1);
            }
            break;
        }
        case SceneShape::TRAPEZOIDAL: {
            const int inset = rng.range(24, std::max(25, sw / 5));
            for (int y = y0; y < y1; ++y) {
                const double t = static_cast<double>(y - y0) / std::max(1, sh - 1);
                const int l = x0 + static_cast<int>(std::lround(inset * (1.0 - t)));
                const int r = x1 - static_cast<int>(std::lround(inset * (1.0 - t)));
                row(y, l, r);
            }
            break;
        }
        case SceneShape::IRREGULAR: {
            // wavy bottom edge plus a clipped top-right corner
            const int amp = rng.range(9, 16);
            const double phase = rng.range(0, 628) / 100.0;
            const int notch_w = rng.range(40, 70), notch_h = rng.range(24, 40);
            for (int y = y0; y < y1; ++y) row(y, x0, x1);
            for (int x = x0; x < x1; ++x) {
                const int trim =
                    static_cast<int>(std::lround(amp * (0.5 + 0.5 * std::sin(x / 23.0 + phase))));
                for (int y = y1 - trim; y < y1; ++y) area.mask.set(x, y, false);
            }
            for (int y = y0; y < y0 + notch_h; ++y)
                for (int x = x1 - notch_w; x < x1; ++x) area.mask.set(x, y, false);
            break;
        }
    }
    int bl = w, bt = h, br = 0, bb = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (area.mask.get(x, y)) {
                bl = std::min(bl, x);
                br = std::max(br, x + 1);
                bt = std::min(bt, y);
                bb = std::max(bb, y + 1);
            }
    area.box = {bl, bt, br, bb};
    return area;
}

void put_px(ScanImage& img, int x, int y, std::uint8_t v) {
    for (int c = 0; c < img.channels; ++c) img.at(x, y, c) = v;
}

void put_rgb(ScanImage& img, int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    img.at(x, y, 0) = r;
    img.at(x, y, 1) = g;
    img.at(x, y, 2) = b;
}

void require_inside(const SceneSpec& spec, int x0, int y0, int x1, int y1, const char* what) {
    if (x0 < 0 || y0 < 0 || x1 > spec.width || y1 > spec.height)
        throw SpecError(std::string("synthgen: ") + what + " outside canvas");
}

void draw_cross(ScanImage& img, int cx, int cy, int span, std::uint8_t v) {
    const int k = span / 2;
    for (int t = -k; t <= k; ++t)
        for (int off = -1; off <= 1; ++off) {
            put_px(img, cx + off, cy + t, v);
            put_px(img, cx + t, cy + off, v);
        }
}

void draw_x(ScanImage& img, int cx, int cy, int span, std::uint8_t v) {
    const int k = (span - 1) / 2;
    for (int t = -k; t <= k; ++t)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                put_px(img, cx + t + dx, cy + t + dy, v);
                put_px(img, cx + t + dx, cy - t + dy, v);
            }
}

void draw_dotted(ScanImage& img, int cx, int cy, int len, double angle_deg, std::uint8_t v) {
    const double a = angle_deg * 3.14159265358979323846 / 180.0;
    const double dx = std::cos(a), dy = std::sin(a);
    for (int d = -len / 2; d <= len / 2; ++d) {
        if (((d % 5) + 5) % 5 >= 3) continue;  // dash 3, gap 2
        const int x = cx + static_cast<int>(std::lround(d * dx));
        const int y = cy + static_cast<int>(std::lround(d * dy));
        for (int oy = 0; oy < 2; ++oy)
            for (int ox = 0; ox < 2; ++ox) put_px(img, x + ox, y + oy, v);
    }
}

struct TextTemplate {
    const char* text;
    Laterality lat;
    Orientation ori;
    int clock_h, clock_m;     // -1 = none
    double dist;              // <= 0 = none
    DistanceUnit unit;
    bool axilla, measurement, procedural;
};

// every string stays within the embedded font charset
constexpr TextTemplate kTemplates[] = {
    {"RT BREAST 10:00 3 CM FN", Laterality::RIGHT, Orientation::NONE, 10, 0, 3.0,
     DistanceUnit::CM, false, false, false},
    {"LT BREAST 2:30 1.5 CM FN", Laterality::LEFT, Orientation::NONE, 2, 30, 1.5,
     DistanceUnit::CM, false, false, false},
    {"RT ARAD 9:00", Laterality::RIGHT, Orientation::ANTIRADIAL, 9, 0, -1.0, DistanceUnit::CM,
     false, false, false},
    {"LT RAD 4:00 2 CM FN", Laterality::LEFT, Orientation::RADIAL, 4, 0, 2.0, DistanceUnit::CM,
     false, false, false},
    {"RT TRANS", Laterality::RIGHT, Orientation::TRANSVERSE, -1, 0, -1.0, DistanceUnit::CM,
     false, false, false},
    {"LT SAG 12:00", Laterality::LEFT, Orientation::SAGITTAL, 12, 0, -1.0, DistanceUnit::CM,
     false, false, false},
    {"LT LONG 6 O'CLOCK", Laterality::LEFT, Orientation::LONGITUDINAL, 6, 0, -1.0,
     DistanceUnit::CM, false, false, false},
    {"RT OBL 11:30 8 MM N", Laterality::RIGHT, Orientation::OBLIQUE, 11, 30, 8.0,
     DistanceUnit::MM, false, false, false},
    {"1.2 X 0.8 CM", Laterality::NONE, Orientation::NONE, -1, 0, -1.0, DistanceUnit::CM, false,
     true, false},
    {"RT 1.5 X 1.0 X 0.7 CM", Laterality::RIGHT, Orientation::NONE, -1, 0, -1.0,
     DistanceUnit::CM, false, true, false},
    {"LT AXILLA", Laterality::LEFT, Orientation::NONE, -1, 0, -1.0, DistanceUnit::CM, true,
     false, false},
    {"RT AX TRANS", Laterality::RIGHT, Orientation::TRANSVERSE, -1, 0, -1.0, DistanceUnit::CM,
     true, false, false},
};

constexpr TextTemplate kProcedural[] = {
    {"US GUIDED BIOPSY", Laterality::NONE, Orientation::NONE, -1, 0, -1.0, DistanceUnit::CM,
     false, false, true},
    {"CLIP PLACED POST-FIRE", Laterality::NONE, Orientation::NONE, -1, 0, -1.0,
     DistanceUnit::CM, false, false, true},
    {"LT WIRE LOC", Laterality::LEFT, Orientation::NONE, -1, 0, -1.0, DistanceUnit::CM, false,
     false, true},
    {"RT FNA ASPIRATION", Laterality::RIGHT, Orientation::NONE, -1, 0, -1.0, DistanceUnit::CM,
     false, false, true},
    {"CORE NEEDLE PRE-FIRE", Laterality::NONE, Orientation::NONE, -1, 0, -1.0, DistanceUnit::CM,
     false, false, true},
};

FeatureSpec text_feature(const TextTemplate& t) {
    FeatureSpec f;
    f.kind = FeatureKind::TEXT_LABEL;
    f.text = t.text;
    f.text_scale = 2;
    f.laterality = t.lat;
    f.orientation = t.ori;
    if (t.clock_h > 0) f.clock = ClockPosition{t.clock_h, t.clock_m};
    if (t.dist > 0) f.distance = NippleDistance{t.dist, t.unit};
    f.axilla = t.axilla;
    f.measurement = t.measurement;
    f.procedural = t.procedural;
    return f;
}

bool wants_color(const SceneSpec& spec) {
    for (const FeatureSpec& f : spec.features)
        if (f.kind == FeatureKind::DOPPLER_PATCH || f.kind == FeatureKind::INDICATOR_RECT ||
            f.kind == FeatureKind::SPANNING_LINE)
            return true;
    return false;
}

}  // namespace

const char* to_string(SceneShape s) {
    switch (s) {
        case SceneShape::RECTANGULAR: return "RECTANGULAR";
        case SceneShape::CONVEX: return "CONVEX";
        case SceneShape::TRAPEZOIDAL: return "TRAPEZOIDAL";
        default: return "IRREGULAR";
    }
}

Scene render(const SceneSpec& spec) {
    if (spec.width < 160 || spec.height < 120)
        throw SpecError("synthgen: canvas must be at least 160x120");
    if (spec.speckle_level < 0 || spec.speckle_level > 0.2)
        throw SpecError("synthgen: speckle level out of range [0, 0.2]");
    bool dual = false, blackout = false;
    for (const FeatureSpec& f : spec.features) {
        dual = dual || f.kind == FeatureKind::DUAL_SEAM;
        blackout = blackout || f.kind == FeatureKind::BLACKOUT;
    }
    if (dual && spec.shape != SceneShape::RECTANGULAR)
        throw SpecError("synthgen: dual seams require a rectangular scan area");

    SplitMix64 rng(spec.seed);
    const ScanArea area = make_scan_area(rng, spec.width, spec.height, spec.shape, dual);
    const int channels = wants_color(spec) ? 3 : 1;
    ScanImage img = ScanImage::make(spec.width, spec.height, channels, 0);

    const int seam = spec.width / 2;
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            if (!area.mask.get(x, y)) continue;
            // dual panels sit ~100 levels apart so the seam gradient clears
            // the canny high threshold; plain tissue spans <= 10 levels
            const int base = dual ? (x < seam ? 70 : 170) : 96;
            const double n = value_noise(spec.seed, x, y);
            const int v = static_cast<int>(std::lround(base * (1.0 + spec.speckle_level * n)));
            put_px(img, x, y, static_cast<std::uint8_t>(std::clamp(v, 1, 255)));
        }
    }

    Scene scene{std::move(img), {}};
    GroundTruth& truth = scene.truth;
    truth.scan_box = area.box;
    if (dual) {
        truth.is_dual = true;
        truth.seam_x = seam;
    }

    long long colored = 0;
    for (const FeatureSpec& f : spec.features) {
        switch (f.kind) {
            case FeatureKind::CALIPER_CROSS:
            case FeatureKind::CALIPER_X: {
                if (!f.negative_example && (f.size < 12 || f.size > 66))
                    throw SpecError(
                        "synthgen: caliper size outside the detectable band [12, 66]; "
                        "mark it negative_example to force it");
                const int k = f.size / 2;
                require_inside(spec, f.x - k - 1, f.y - k - 1, f.x + k + 2, f.y + k + 2,
                               "caliper");
                if (f.kind == FeatureKind::CALIPER_CROSS)
                    draw_cross(scene.image, f.x, f.y, f.size | 1, 190);
                else
                    draw_x(scene.image, f.x, f.y, f.size | 1, 190);
                truth.caliper_boxes.push_back({f.x - k, f.y - k, f.x + k + 1, f.y + k + 1});
                if (!f.negative_example) truth.has_calipers = true;
                break;
            }
            case FeatureKind::CALIPER_DOTTED_LINE: {
                const int len = f.size > 0 ? f.size : 120;
                require_inside(spec, f.x - len / 2 - 2, f.y - len / 2 - 2, f.x + len / 2 + 3,
                               f.y + len / 2 + 3, "dotted line");
                if (f.crossing) {
                    draw_dotted(scene.image, f.x, f.y, len, 35.0, 190);
                    draw_dotted(scene.image, f.x, f.y, len, 125.0, 190);
                    if (!f.negative_example) truth.has_calipers = true;
                } else {
                    draw_dotted(scene.image, f.x, f.y, len, 35.0, 190);
                }
                break;
            }
            case FeatureKind::DOPPLER_PATCH: {
                require_inside(spec, f.x, f.y, f.x + f.w, f.y + f.h, "doppler patch");
                for (int y = f.y; y < f.y + f.h; ++y)
                    for (int x = f.x; x < f.x + f.w; ++x) {
                        if (!area.mask.get(x, y)) continue;
                        if (((x / 4) + (y / 4)) % 2 == 0)
                            put_rgb(scene.image, x, y, 230, 40, 40);
                        else
                            put_rgb(scene.image, x, y, 90, 90, 255);
                        ++colored;
                    }
                break;
            }
            case FeatureKind::INDICATOR_RECT: {
                require_inside(spec, f.x, f.y, f.x + f.w, f.y + f.h, "indicator rect");
                if (f.w < 12 || f.h < 12) throw SpecError("synthgen: indicator rect too small");
                for (int y = f.y; y < f.y + f.h; ++y)
                    for (int x = f.x; x < f.x + f.w; ++x) {
                        const bool rim = x < f.x + 2 || x >= f.x + f.w - 2 || y < f.y + 2 ||
                                         y >= f.y + f.h - 2;
                        if (!rim) continue;
                        put_rgb(scene.image, x, y, 0, 163, 0);
                        ++colored;
                    }
                truth.non_b_mode = true;
                break;
            }
            case FeatureKind::SPANNING_LINE: {
                const int len = f.size;
                if (f.vertical) {
                    require_inside(spec, f.x, f.y, f.x + 2, f.y + len, "spanning line");
                    for (int y = f.y; y < f.y + len; ++y)
                        for (int x = f.x; x < f.x + 2; ++x) {
                            put_rgb(scene.image, x, y, 0, 163, 0);
                            ++colored;
                        }
                } else {
                    require_inside(spec, f.x, f.y, f.x + len, f.y + 2, "spanning line");
                    for (int y = f.y; y < f.y + 2; ++y)
                        for (int x = f.x; x < f.x + len; ++x) {
                            put_rgb(scene.image, x, y, 0, 163, 0);
                            ++colored;
                        }
                }
                truth.non_b_mode = true;
                break;
            }
            case FeatureKind::TEXT_LABEL: {
                const int tw = font::text_width(f.text, f.text_scale);
                const int th = font::kGlyphHeight * f.text_scale;
                require_inside(spec, f.x, f.y, f.x + tw, f.y + th, "text label");
                font::draw_text(scene.image, f.text, f.x, f.y, f.text_scale, 220);
                size_t run = 0;
                for (char c : f.text) {
                    run = c == ' ' ? 0 : run + 1;
                    if (run >= 2) truth.text_present = true;
                }
                if (f.laterality != Laterality::NONE) truth.laterality = f.laterality;
                if (f.orientation != Orientation::NONE) truth.orientation = f.orientation;
                if (f.clock) truth.clock = f.clock;
                if (f.distance) truth.distance = f.distance;
                truth.axilla = truth.axilla || f.axilla;
                truth.measurement = truth.measurement || f.measurement;
                truth.procedural = truth.procedural || f.procedural;
                break;
            }
            case FeatureKind::DUAL_SEAM:
                break;  // painted with the speckle pass
            case FeatureKind::BLACKOUT: {
                for (int y = 0; y < spec.height; ++y)
                    for (int x = 0; x < spec.width; ++x)
                        put_px(scene.image, x, y,
                               static_cast<std::uint8_t>(hash_mix(spec.seed, (static_cast<std::uint64_t>(y) << 20) ^ x) % 4));
                truth.invalid = true;
                truth.scan_box = scene.image.full_box();
                break;
            }
        }
    }
    if (truth.scan_box.area() > 0)
        truth.doppler_fraction = static_cast<double>(colored) / truth.scan_box.area();
    if (truth.doppler_fraction > 0.005) truth.non_b_mode = true;
    return scene;
}

namespace {

// exact stratified scheduling: fires when floor((i+1)p) - floor(ip) == 1
bool scheduled(double p, int i) {
    return static_cast<long long>(std::floor((i + 1) * p)) -
               static_cast<long long>(std::floor(static_cast<double>(i) * p)) >
           0;
}

}  // namespace

SceneSpec corpus_item_spec(std::uint64_t seed, int index, const CorpusMix& mix) {
    if (index < 0) throw ParameterError("synthgen: corpus index must be >= 0");
    for (double p : {mix.calipers, mix.text, mix.blood_flow, mix.invalid, mix.dual_view,
                     mix.procedural})
        if (p < 0 || p > 1) throw ParameterError("synthgen: mix fractions must be in [0, 1]");

    SceneSpec spec;
    spec.seed = hash_mix(seed, static_cast<std::uint64_t>(index));
    SplitMix64 rng(hash_mix(spec.seed, 0xFEA7u));

    if (scheduled(mix.invalid, index)) {
        spec.features.push_back({.kind = FeatureKind::BLACKOUT});
        return spec;
    }
    if (scheduled(mix.dual_view, index)) {
        spec.shape = SceneShape::RECTANGULAR;
        spec.features.push_back({.kind = FeatureKind::DUAL_SEAM});
        return spec;
    }

    switch (rng.range(0, 3)) {
        case 0: spec.shape = SceneShape::RECTANGULAR; break;
        case 1: spec.shape = SceneShape::CONVEX; break;
        case 2: spec.shape = SceneShape::TRAPEZOIDAL; break;
        default: spec.shape = SceneShape::IRREGULAR; break;
    }

    // scan-area geometry is re-derived the same way render() will, so that
    // feature placement can stay inside the safe central band
    SplitMix64 probe(spec.seed);
    const ScanArea area = make_scan_area(probe, spec.width, spec.height, spec.shape, false);
    const int bw = area.box.width(), bh = area.box.height();
    const double cx = area.box.x_left + bw / 2.0;

    const bool procedural = scheduled(mix.procedural, index);
    if (procedural || scheduled(mix.text, index)) {
        const TextTemplate& t =
            procedural ? kProcedural[rng.range(0, std::size(kProcedural) - 1)]
                       : kTemplates[rng.range(0, std::size(kTemplates) - 1)];
        FeatureSpec f = text_feature(t);
        const int tw = font::text_width(f.text, f.text_scale);
        f.x = rng.range(8, std::max(9, spec.width - tw - 8));
        f.y = rng.range(4, 8);  // top margin, clear of the tissue area
        spec.features.push_back(f);
    }

    if (scheduled(mix.calipers, index)) {
        FeatureSpec f;
        f.kind = rng.range(0, 1) ? FeatureKind::CALIPER_X : FeatureKind::CALIPER_CROSS;
        f.size = rng.range(12, 66);
        // central band: inside every shape and clear of the border mask
        f.x = static_cast<int>(cx) + rng.range(-bw / 8, bw / 8);
        f.y = area.box.y_top + bh / 4 + rng.range(0, bh / 5);
        spec.features.push_back(f);
    }

    if (scheduled(mix.blood_flow, index)) {
        FeatureSpec f;
        f.kind = FeatureKind::DOPPLER_PATCH;
        const double frac = 0.012 + rng.range(0, 100) / 100.0 * 0.02;
        f.w = static_cast<int>(std::lround(std::sqrt(frac * bw * bh * 1.4)));
        f.h = std::max(8, static_cast<int>(std::lround(frac * bw * bh / f.w)));
        f.x = static_cast<int>(cx) - f.w / 2 + rng.range(-bw / 10, bw / 10);
        f.y = area.box.y_top + bh / 2 + rng.range(0, bh / 10);
        spec.features.push_back(f);
    }
    return spec;
}

Scene corpus_item(std::uint64_t seed, int index, const CorpusMix& mix) {
    return render(corpus_item_spec(seed, index, mix));
}

std::vector<Scene> corpus(std::uint64_t seed, int n, const CorpusMix& mix) {
    if (n < 1) throw ParameterError("synthgen: corpus size must be >= 1");
    std::vector<Scene> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(corpus_item(seed, i, mix));
    return out;
}

std::string corpus_source_id(std::uint64_t seed, int index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "synth-%llu-%06d", static_cast<unsigned long long>(seed),
                  index);
    return buf;
}

std::string truth_json_line(const std::string& source_id, const GroundTruth& truth) {
    nlohmann::json j;
    j["source_id"] = source_id;
    nlohmann::json& t = j["truth"];
    t["calipers"]["present"] = truth.has_calipers;
    t["dual"]["is_dual"] = truth.is_dual;
    if (truth.is_dual) t["dual"]["split_x"] = truth.seam_x;
    t["filter"]["invalid"] = truth.invalid;
    t["filter"]["non_b_mode"] = truth.non_b_mode;
    t["crop"]["box"] = {truth.scan_box.x_left, truth.scan_box.y_top, truth.scan_box.x_right,
                        truth.scan_box.y_bottom};
    nlohmann::json& tx = t["text"];
    tx["present"] = truth.text_present;
    tx["laterality"] = to_string(truth.laterality);
    tx["orientation"] = to_string(truth.orientation);
    if (truth.clock) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%d:%02d", truth.clock->hour, truth.clock->minute);
        tx["clock"] = buf;
    }
    if (truth.distance) {
        tx["distance"]["value"] = truth.distance->value;
        tx["distance"]["unit"] = to_string(truth.distance->unit);
    }
    tx["axilla"] = truth.axilla;
    tx["measurement"] = truth.measurement;
    tx["procedural"] = truth.procedural;
    return j.dump();
}

}  // namespace sonoscrub
