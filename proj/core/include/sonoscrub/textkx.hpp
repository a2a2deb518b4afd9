#ifndef SONOSCRUB_TEXTKX_HPP
#define SONOSCRUB_TEXTKX_HPP

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "sonoscrub/ocr.hpp"
#include "sonoscrub/types.hpp"

namespace sonoscrub {

enum class Laterality { NONE, LEFT, RIGHT };
enum class Orientation { NONE, RADIAL, ANTIRADIAL, TRANSVERSE, SAGITTAL, LONGITUDINAL, OBLIQUE };
enum class DistanceUnit { CM, MM };

const char* to_string(Laterality v);
const char* to_string(Orientation v);
const char* to_string(DistanceUnit v);
Laterality laterality_from_string(const std::string& s);
Orientation orientation_from_string(const std::string& s);
DistanceUnit distance_unit_from_string(const std::string& s);

struct ClockPosition {
    int hour = 12;   // 1..12
    int minute = 0;  // 0..59
    bool operator==(const ClockPosition&) const = default;
};

struct NippleDistance {
    double value = 0.0;  // strictly positive
    DistanceUnit unit = DistanceUnit::CM;
    bool operator==(const NippleDistance&) const = default;
};

// Every positive field is justified by at least one recorded span: the
// matched text and the half-open token range it came from.
struct MatchSpan {
    std::string field;
    std::string text;
    int token_first = 0;
    int token_last = 0;  // inclusive
    bool operator==(const MatchSpan&) const = default;
};

struct TextAnnotation {
    std::vector<OcrToken> tokens;  // canonical reading order
    Laterality laterality = Laterality::NONE;
    Orientation orientation = Orientation::NONE;
    std::optional<ClockPosition> clock_position;
    std::optional<NippleDistance> distance_from_nipple;
    bool axilla = false;
    bool lesion_measurement = false;
    bool procedural = false;
    std::string raw_concatenation;  // normalized uppercase, space-joined
    std::vector<MatchSpan> spans;
    std::vector<std::string> notes;  // e.g. laterality conflicts
    bool operator==(const TextAnnotation&) const = default;
};

struct TextkxConfig {
    std::string backend = "builtin";  // builtin | none | command:<cmd>
    double min_confidence = 0.30;
    // category name -> replacement pattern list (ECMAScript regex, uppercase
    // input). Categories: left, right, antiradial, radial, transverse,
    // sagittal, longitudinal, oblique, clock, distance, measurement, axilla,
    // procedural. Overriding a category replaces its default patterns.
    std::map<std::string, std::vector<std::string>> pattern_overrides;
    bool operator==(const TextkxConfig&) const = default;
};

// Compiled pattern set; build once per run, classification is pure.
class Grammar {
  public:
    explicit Grammar(const TextkxConfig& cfg = {});
    const std::vector<std::regex>& category(const std::string& name) const;

  private:
    std::map<std::string, std::vector<std::regex>> patterns_;
};

// Orders tokens canonically, normalizes (uppercase; O->0, I/L->1 inside
// digit-bearing tokens), and applies the category grammar. Conflicting
// laterality evidence yields NONE plus a note.
TextAnnotation classify_annotation(const std::vector<OcrToken>& tokens, const Grammar& grammar);
TextAnnotation classify_annotation(const std::vector<OcrToken>& tokens,
                                   const TextkxConfig& cfg = {});

// Case-study mode: true iff any token has at least two characters (single
// characters are indistinguishable from speckle misreads).
bool detect_text_presence(const std::vector<OcrToken>& tokens);

}  // namespace sonoscrub

#endif
