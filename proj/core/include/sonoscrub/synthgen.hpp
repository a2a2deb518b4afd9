#ifndef SONOSCRUB_SYNTHGEN_HPP
#define SONOSCRUB_SYNTHGEN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sonoscrub/textkx.hpp"
#include "sonoscrub/types.hpp"

namespace sonoscrub {

// Shape of the painted tissue area (the cropper's four target classes).
enum class SceneShape { RECTANGULAR, CONVEX, TRAPEZOIDAL, IRREGULAR };
const char* to_string(SceneShape s);

enum class FeatureKind {
    CALIPER_CROSS,
    CALIPER_X,
    CALIPER_DOTTED_LINE,
    DOPPLER_PATCH,
    INDICATOR_RECT,
    SPANNING_LINE,
    TEXT_LABEL,
    DUAL_SEAM,
    BLACKOUT
};

struct FeatureSpec {
    FeatureKind kind = FeatureKind::CALIPER_CROSS;
    int x = 0, y = 0;  // center for calipers, top-left for rects and text
    int w = 0, h = 0;  // extent for DOPPLER_PATCH / INDICATOR_RECT
    int size = 0;      // caliper span; detectable range is [12, 66]
    bool vertical = false;      // SPANNING_LINE direction
    bool crossing = false;      // CALIPER_DOTTED_LINE: paint an intersecting pair
    bool negative_example = false;  // permit geometry outside the detectable band
    std::string text;           // TEXT_LABEL content (embedded font charset)
    int text_scale = 2;
    // expected annotation outcome for TEXT_LABEL features
    Laterality laterality = Laterality::NONE;
    Orientation orientation = Orientation::NONE;
    std::optional<ClockPosition> clock;
    std::optional<NippleDistance> distance;
    bool axilla = false;
    bool measurement = false;
    bool procedural = false;
};

// Aggregated expected detector outcome for one rendered scene.
struct GroundTruth {
    bool invalid = false;
    bool non_b_mode = false;
    bool has_calipers = false;
    bool is_dual = false;
    bool text_present = false;
    int seam_x = -1;                       // original-frame column when is_dual
    BoundingBox scan_box;                  // painted tissue bounding box
    double doppler_fraction = 0.0;         // colored area / scan_box area
    std::vector<BoundingBox> caliper_boxes;  // painted ink extents
    Laterality laterality = Laterality::NONE;
    Orientation orientation = Orientation::NONE;
    std::optional<ClockPosition> clock;
    std::optional<NippleDistance> distance;
    bool axilla = false;
    bool measurement = false;
    bool procedural = false;
};

struct SceneSpec {
    std::uint64_t seed = 0;
    int width = 512, height = 384;
    SceneShape shape = SceneShape::RECTANGULAR;
    double speckle_level = 0.04;  // keeps plain tissue within ten gray levels
    std::vector<FeatureSpec> features;
};

struct Scene {
    ScanImage image;
    GroundTruth truth;
};

// Deterministic: identical spec => identical bytes. Scenes with color
// features render three channels, everything else renders one. Geometry
// outside the canvas throws SpecError, as does a caliper size outside the
// detectable band without negative_example.
Scene render(const SceneSpec& spec);

// Category proportions for corpus generation (fractions of n).
struct CorpusMix {
    double calipers = 0.207;
    double text = 0.926;
    double blood_flow = 0.0232;
    double invalid = 0.0047;
    double dual_view = 0.0093;
    double procedural = 0.0721;  // subset of text
};

// Item i of the corpus depends only on (seed, i, mix): corpora are
// prefix-stable and can be generated in parallel or streamed.
SceneSpec corpus_item_spec(std::uint64_t seed, int index, const CorpusMix& mix = {});
Scene corpus_item(std::uint64_t seed, int index, const CorpusMix& mix = {});
std::vector<Scene> corpus(std::uint64_t seed, int n, const CorpusMix& mix = {});

std::string corpus_source_id(std::uint64_t seed, int index);

// One JSONL record mirroring the manifest schema, for direct scoring.
std::string truth_json_line(const std::string& source_id, const GroundTruth& truth);

}  // namespace sonoscrub

#endif
