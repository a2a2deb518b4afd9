#include "sonoscrub/textkx.hpp"

#include <algorithm>
#include <cctype>

namespace sonoscrub {

const char* to_string(Laterality v) {
    switch (v) {
        case Laterality::LEFT: return "LEFT";
        case Laterality::RIGHT: return "RIGHT";
        default: return "NONE";
    }
}

const char* to_string(Orientation v) {
    switch (v) {
        case Orientation::RADIAL: return "RADIAL";
        case Orientation::ANTIRADIAL: return "ANTIRADIAL";
        case Orientation::TRANSVERSE: return "TRANSVERSE";
        case Orientation::SAGITTAL: return "SAGITTAL";
        case Orientation::LONGITUDINAL: return "LONGITUDINAL";
        case Orientation::OBLIQUE: return "OBLIQUE";
        default: return "NONE";
    }
}

const char* to_string(DistanceUnit v) { return v == DistanceUnit::MM ? "MM" : "CM"; }

Laterality laterality_from_string(const std::string& s) {
    if (s == "LEFT") return Laterality::LEFT;
    if (s == "RIGHT") return Laterality::RIGHT;
    if (s == "NONE") return Laterality::NONE;
    throw FormatError("unknown laterality: " + s);
}

Orientation orientation_from_string(const std::string& s) {
    for (Orientation v : {Orientation::NONE, Orientation::RADIAL, Orientation::ANTIRADIAL,
                          Orientation::TRANSVERSE, Orientation::SAGITTAL,
                          Orientation::LONGITUDINAL, Orientation::OBLIQUE})
        if (s == to_string(v)) return v;
    throw FormatError("unknown orientation: " + s);
}

DistanceUnit distance_unit_from_string(const std::string& s) {
    if (s == "CM") return DistanceUnit::CM;
    if (s == "MM") return DistanceUnit::MM;
    throw FormatError("unknown distance unit: " + s);
}

namespace {

const char* kNumber = "([0-9]{1,2}(\\.[0-9]{1,2})?)";

std::map<std::string, std::vector<std::string>> default_patterns() {
    std::map<std::string, std::vector<std::string>> p;
    p["right"] = {"\\b(RT|RIGHT)\\b"};
    p["left"] = {"\\b(LT|LEFT)\\b"};
    p["antiradial"] = {"\\b(ARAD|ANTI[- ]?RAD(IAL)?)\\b"};
    p["radial"] = {"\\bRAD(IAL)?\\b"};
    p["transverse"] = {"\\b(TRANS|TRV|TRANSVERSE)\\b"};
    p["sagittal"] = {"\\b(SAG|SAGITTAL)\\b"};
    p["longitudinal"] = {"\\b(LONG|LONGITUDINAL)\\b"};
    p["oblique"] = {"\\b(OBL|OBLIQUE)\\b"};
    // group 1 = hour; group 2 = minute when the h:mm form matched
    p["clock"] = {std::string("\\b(1[0-2]|0?[1-9]):([0-5][0-9])\\b"),
                  std::string("\\b(1[0-2]|0?[1-9]) ?O'?CLOCK\\b")};
    // group 1 = value, group 3 = unit; the nipple cue is checked separately
    p["distance"] = {std::string("\\b") + kNumber + " ?(CM|MM)\\b"};
    p["measurement"] = {std::string("\\b") + kNumber + " ?[X*] ?" + kNumber + "( ?[X*] ?" +
                        kNumber + ")?( ?(CM|MM))?\\b"};
    p["axilla"] = {"\\b(AX|AXILLA|AXILLARY)\\b"};
    p["procedural"] = {
        "\\b(BIOPSY|BX|FNA|CORE|NEEDLE|WIRE|GUID(E|ED|ANCE)|PRE-?FIRE|POST-?FIRE|CLIP|"
        "MARKER|COIL|ASPIRATION|LOC(ALIZATION)?)\\b"};
    return p;
}

struct Joined {
    std::string text;
    std::vector<int> token_begin;  // char offset of each token in text
    std::vector<int> token_end;
};

Joined join_tokens(const std::vector<std::string>& normalized) {
    Joined j;
    for (size_t i = 0; i < normalized.size(); ++i) {
        if (i) j.text += ' ';
        j.token_begin.push_back(static_cast<int>(j.text.size()));
        j.text += normalized[i];
        j.token_end.push_back(static_cast<int>(j.text.size()));
    }
    return j;
}

// token range [first, last] covering the half-open char span [begin, end)
std::pair<int, int> span_tokens(const Joined& j, int begin, int end) {
    int first = -1, last = -1;
    for (size_t i = 0; i < j.token_begin.size(); ++i) {
        if (j.token_end[i] <= begin || j.token_begin[i] >= end) continue;
        if (first < 0) first = static_cast<int>(i);
        last = static_cast<int>(i);
    }
    return {first, last};
}

bool digit_bearing_numeric(const std::string& up) {
    bool digit = false;
    for (char c : up) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digit = true;
        } else if (c != 'O' && c != 'I' && c != 'L' && c != ':' && c != '.' && c != 'X' &&
                   c != '*' && c != '+' && c != '-' && c != '/') {
            return false;
        }
    }
    return digit;
}

std::string normalize_token(const std::string& raw) {
    std::string up;
    up.reserve(raw.size());
    for (char c : raw) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (digit_bearing_numeric(up)) {
        for (char& c : up) {
            if (c == 'O') c = '0';
            if (c == 'I' || c == 'L') c = '1';
        }
    }
    return up;
}

struct Matcher {
    const Grammar& grammar;
    const Joined& joined;
    std::vector<MatchSpan>& spans;

    // first match of any pattern in the category; records a span when found
    std::optional<std::smatch> first(const std::string& category, bool record = true) {
        for (const std::regex& re : grammar.category(category)) {
            std::smatch m;
            if (std::regex_search(joined.text, m, re)) {
                if (record) {
                    const int begin = static_cast<int>(m.position(0));
                    const int end = begin + static_cast<int>(m.length(0));
                    const auto [tf, tl] = span_tokens(joined, begin, end);
                    spans.push_back({category, m.str(0), tf, tl});
                }
                return m;
            }
        }
        return std::nullopt;
    }

    // all matches of every pattern in the category
    std::vector<std::smatch> all(const std::string& category) {
        std::vector<std::smatch> out;
        for (const std::regex& re : grammar.category(category)) {
            auto it = std::sregex_iterator(joined.text.begin(), joined.text.end(), re);
            for (; it != std::sregex_iterator(); ++it) out.push_back(*it);
        }
        return out;
    }
};

}  // namespace

Grammar::Grammar(const TextkxConfig& cfg) {
    std::map<std::string, std::vector<std::string>> raw = default_patterns();
    for (const auto& [category, repl] : cfg.pattern_overrides) {
        if (!raw.count(category))
            throw ConfigError("textkx: unknown pattern category '" + category + "'");
        raw[category] = repl;
    }
    for (const auto& [category, pats] : raw) {
        std::vector<std::regex> compiled;
        for (const std::string& p : pats) {
            try {
                compiled.emplace_back(p, std::regex::ECMAScript);
            } catch (const std::regex_error& e) {
                throw ConfigError("textkx: bad pattern for '" + category + "': " + e.what());
            }
        }
        patterns_.emplace(category, std::move(compiled));
    }
}

const std::vector<std::regex>& Grammar::category(const std::string& name) const {
    auto it = patterns_.find(name);
    if (it == patterns_.end()) throw ParameterError("textkx: unknown category " + name);
    return it->second;
}

TextAnnotation classify_annotation(const std::vector<OcrToken>& tokens, const Grammar& grammar) {
    TextAnnotation ann;
    ann.tokens = tokens;
    std::sort(ann.tokens.begin(), ann.tokens.end(), [](const OcrToken& a, const OcrToken& b) {
        if (a.bbox.y_top != b.bbox.y_top) return a.bbox.y_top < b.bbox.y_top;
        if (a.bbox.x_left != b.bbox.x_left) return a.bbox.x_left < b.bbox.x_left;
        if (a.bbox.y_bottom != b.bbox.y_bottom) return a.bbox.y_bottom < b.bbox.y_bottom;
        if (a.bbox.x_right != b.bbox.x_right) return a.bbox.x_right < b.bbox.x_right;
        return a.text < b.text;
    });
    std::vector<std::string> normalized;
    normalized.reserve(ann.tokens.size());
    for (const OcrToken& t : ann.tokens) normalized.push_back(normalize_token(t.text));
    const Joined joined = join_tokens(normalized);
    ann.raw_concatenation = joined.text;
    if (ann.tokens.empty()) return ann;

    Matcher m{grammar, joined, ann.spans};

    const bool right = m.first("right").has_value();
    const bool left = m.first("left").has_value();
    if (right && left) {
        ann.laterality = Laterality::NONE;
        ann.notes.push_back("conflicting laterality tokens");
    } else if (right) {
        ann.laterality = Laterality::RIGHT;
    } else if (left) {
        ann.laterality = Laterality::LEFT;
    }

    // antiradial first: its matches contain RAD and must suppress it
    if (m.first("antiradial")) {
        ann.orientation = Orientation::ANTIRADIAL;
    } else if (m.first("radial")) {
        ann.orientation = Orientation::RADIAL;
    } else if (m.first("transverse")) {
        ann.orientation = Orientation::TRANSVERSE;
    } else if (m.first("sagittal")) {
        ann.orientation = Orientation::SAGITTAL;
    } else if (m.first("longitudinal")) {
        ann.orientation = Orientation::LONGITUDINAL;
    } else if (m.first("oblique")) {
        ann.orientation = Orientation::OBLIQUE;
    }

    if (auto clock = m.first("clock")) {
        ClockPosition cp;
        cp.hour = std::stoi((*clock)[1].str());
        cp.minute = clock->size() > 2 && (*clock)[2].matched ? std::stoi((*clock)[2].str()) : 0;
        ann.clock_position = cp;
    }

    // distance needs a nipple cue within two tokens and must not sit inside a
    // measurement expression (adjacent X or * separator)
    for (const std::smatch& dm : m.all("distance")) {
        const int begin = static_cast<int>(dm.position(0));
        const int end = begin + static_cast<int>(dm.length(0));
        const auto [tf, tl] = span_tokens(joined, begin, end);
        if (tf < 0) continue;
        const double value = std::stod(dm[1].str());
        if (value <= 0) continue;
        auto is_sep = [&](int idx) {
            return idx >= 0 && idx < static_cast<int>(normalized.size()) &&
                   (normalized[idx] == "X" || normalized[idx] == "*");
        };
        if (is_sep(tf - 1) || is_sep(tl + 1)) continue;
        // inside a single token, an adjacent X shows up in the text itself
        const bool glued_sep =
            (begin > 0 && (joined.text[begin - 1] == 'X' || joined.text[begin - 1] == '*')) ||
            (end < static_cast<int>(joined.text.size()) &&
             (joined.text[end] == 'X' || joined.text[end] == '*'));
        if (glued_sep) continue;
        int cue_first = -1, cue_last = -1;
        const int lo = std::max(0, tf - 2);
        const int hi = std::min(static_cast<int>(normalized.size()) - 1, tl + 2);
        for (int i = lo; i <= hi && cue_first < 0; ++i) {
            if (normalized[i] == "FN" || normalized[i] == "N") {
                cue_first = cue_last = i;
            } else if (normalized[i] == "FROM" && i + 1 < static_cast<int>(normalized.size()) &&
                       normalized[i + 1] == "NIPPLE") {
                cue_first = i;
                cue_last = i + 1;
            }
        }
        if (cue_first < 0) continue;
        ann.distance_from_nipple =
            NippleDistance{value, distance_unit_from_string(dm[3].str())};
        const int sf = std::min(tf, cue_first), sl = std::max(tl, cue_last);
        std::string span_text = joined.text.substr(
            joined.token_begin[sf], joined.token_end[sl] - joined.token_begin[sf]);
        ann.spans.push_back({"distance", span_text, sf, sl});
        break;
    }

    if (m.first("measurement")) ann.lesion_measurement = true;
    if (m.first("axilla")) ann.axilla = true;
    if (m.first("procedural")) ann.procedural = true;
    return ann;
}

TextAnnotation classify_annotation(const std::vector<OcrToken>& tokens,
                                   const TextkxConfig& cfg) {
    return classify_annotation(tokens, Grammar(cfg));
}

bool detect_text_presence(const std::vector<OcrToken>& tokens) {
    return std::any_of(tokens.begin(), tokens.end(),
                       [](const OcrToken& t) { return t.text.size() >= 2; });
}

}  // namespace sonoscrub
