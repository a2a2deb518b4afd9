#include "sonoscrub/score.hpp"

#include <fstream>

#include "json.hpp"

namespace sonoscrub {
namespace {

using nlohmann::json;

const std::vector<std::string> kCategories = {
    "invalid",    "non_b_mode", "calipers",    "dual_view",
    "text_present", "axilla",   "measurement", "procedural",
    "laterality", "orientation", "clock",      "distance"};

// Category values decoded from either record schema; flags plus the four
// valued fields in their wire form.
struct CategoryView {
    std::map<std::string, bool> flags;
    std::string laterality = "NONE";
    std::string orientation = "NONE";
    std::optional<std::string> clock;
    std::optional<std::pair<double, std::string>> distance;  // value, unit
};

bool nested_flag(const json& t, const char* outer, const char* inner) {
    if (!t.contains(outer)) return false;
    const json& o = t.at(outer);
    if (!o.contains(inner)) return false;
    return o.at(inner).get<bool>();
}

CategoryView extract_view(const json& rec) {
    const json& t = rec.contains("truth") ? rec.at("truth") : rec;
    CategoryView v;
    v.flags["invalid"] = nested_flag(t, "filter", "invalid");
    v.flags["non_b_mode"] = nested_flag(t, "filter", "non_b_mode");
    v.flags["calipers"] = nested_flag(t, "calipers", "present");
    v.flags["dual_view"] = nested_flag(t, "dual", "is_dual");
    v.flags["text_present"] = nested_flag(t, "text", "present");
    v.flags["axilla"] = nested_flag(t, "text", "axilla");
    v.flags["measurement"] = nested_flag(t, "text", "measurement");
    v.flags["procedural"] = nested_flag(t, "text", "procedural");
    if (t.contains("text")) {
        const json& tx = t.at("text");
        if (tx.contains("laterality")) v.laterality = tx.at("laterality").get<std::string>();
        if (tx.contains("orientation")) v.orientation = tx.at("orientation").get<std::string>();
        if (tx.contains("clock")) v.clock = tx.at("clock").get<std::string>();
        if (tx.contains("distance"))
            v.distance = {tx.at("distance").at("value").get<double>(),
                          tx.at("distance").at("unit").get<std::string>()};
    }
    return v;
}

// Valued category: positive means "a value was asserted"; only the exact
// value matches. Wrong-value predictions land in FN, never TP.
template <typename T>
void tally_valued(ConfusionCells& c, bool truth_pos, bool pred_pos, const T& truth_val,
                  const T& pred_val) {
    if (truth_pos) {
        if (pred_pos && truth_val == pred_val) ++c.tp;
        else ++c.fn;
    } else {
        if (pred_pos) ++c.fp;
        else ++c.tn;
    }
}

void tally_flag(ConfusionCells& c, bool truth_pos, bool pred_pos) {
    if (truth_pos) pred_pos ? ++c.tp : ++c.fn;
    else pred_pos ? ++c.fp : ++c.tn;
}

std::vector<std::pair<std::string, CategoryView>> read_views(const std::string& path,
                                                             std::vector<std::string>& warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::vector<std::pair<std::string, CategoryView>> out;
    std::map<std::string, bool> seen;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(path + ":" + std::to_string(n) + ": not valid JSON: " + e.what());
        }
        try {
            std::string id = j.at("source_id").get<std::string>();
            if (seen[id]) {
                warnings.push_back(path + ": duplicate source_id '" + id +
                                   "', keeping the first record");
                continue;
            }
            seen[id] = true;
            out.emplace_back(std::move(id), extract_view(j));
        } catch (const json::exception& e) {
            throw FormatError(path + ":" + std::to_string(n) + ": bad record: " + e.what());
        }
    }
    return out;
}

}  // namespace

std::optional<double> sensitivity(const ConfusionCells& c) {
    if (c.tp + c.fn == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> specificity(const ConfusionCells& c) {
    if (c.tn + c.fp == 0) return std::nullopt;
    return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

const std::vector<std::string>& score_categories() { return kCategories; }

void accumulate_report(RunSummary& s, const ScanReport& r) {
    ++s.processed;
    if (r.status == ScanStatus::DECODE_ERROR) ++s.decode_errors;
    if (r.status == ScanStatus::OCR_SKIPPED) ++s.ocr_skipped;
    auto bump = [&](const char* cat, bool pos) {
        if (pos) ++s.flag_counts[cat];
        else s.flag_counts.try_emplace(cat, 0);
    };
    bump("invalid", r.filter && r.filter->invalid);
    bump("non_b_mode", r.filter && r.filter->non_b_mode);
    bump("calipers", r.calipers && r.calipers->present);
    bump("dual_view", r.dual_view && r.dual_view->is_dual);
    bump("text_present", r.text && detect_text_presence(r.text->tokens));
    bump("axilla", r.text && r.text->axilla);
    bump("measurement", r.text && r.text->lesion_measurement);
    bump("procedural", r.text && r.text->procedural);
    bump("laterality", r.text && r.text->laterality != Laterality::NONE);
    bump("orientation", r.text && r.text->orientation != Orientation::NONE);
    bump("clock", r.text && r.text->clock_position.has_value());
    bump("distance", r.text && r.text->distance_from_nipple.has_value());
}

RunSummary summarize_reports(const std::vector<ScanReport>& reports) {
    RunSummary s;
    for (const auto& r : reports) accumulate_report(s, r);
    return s;
}

RunSummary score(const std::string& manifest_path, const std::string& truth_path) {
    RunSummary s;
    auto predictions = read_views(manifest_path, s.warnings);
    auto truths = read_views(truth_path, s.warnings);
    std::map<std::string, const CategoryView*> truth_by_id;
    for (const auto& [id, view] : truths) truth_by_id[id] = &view;

    std::map<std::string, bool> matched;
    for (const auto& cat : kCategories) s.confusion[cat];  // present even when empty
    for (const auto& [id, pred] : predictions) {
        auto it = truth_by_id.find(id);
        if (it == truth_by_id.end()) {
            s.warnings.push_back("unmatched manifest id '" + id + "' (excluded)");
            continue;
        }
        matched[id] = true;
        const CategoryView& truth = *it->second;
        ++s.processed;
        for (const auto& [cat, pos] : pred.flags)
            if (pos) ++s.flag_counts[cat];
        tally_flag(s.confusion["invalid"], truth.flags.at("invalid"), pred.flags.at("invalid"));
        tally_flag(s.confusion["non_b_mode"], truth.flags.at("non_b_mode"),
                   pred.flags.at("non_b_mode"));
        tally_flag(s.confusion["calipers"], truth.flags.at("calipers"),
                   pred.flags.at("calipers"));
        tally_flag(s.confusion["dual_view"], truth.flags.at("dual_view"),
                   pred.flags.at("dual_view"));
        tally_flag(s.confusion["text_present"], truth.flags.at("text_present"),
                   pred.flags.at("text_present"));
        tally_flag(s.confusion["axilla"], truth.flags.at("axilla"), pred.flags.at("axilla"));
        tally_flag(s.confusion["measurement"], truth.flags.at("measurement"),
                   pred.flags.at("measurement"));
        tally_flag(s.confusion["procedural"], truth.flags.at("procedural"),
                   pred.flags.at("procedural"));
        tally_valued(s.confusion["laterality"], truth.laterality != "NONE",
                     pred.laterality != "NONE", truth.laterality, pred.laterality);
        tally_valued(s.confusion["orientation"], truth.orientation != "NONE",
                     pred.orientation != "NONE", truth.orientation, pred.orientation);
        tally_valued(s.confusion["clock"], truth.clock.has_value(), pred.clock.has_value(),
                     truth.clock, pred.clock);
        tally_valued(s.confusion["distance"], truth.distance.has_value(),
                     pred.distance.has_value(), truth.distance, pred.distance);
    }
    for (const auto& [id, view] : truths)
        if (!matched.count(id))
            s.warnings.push_back("unmatched ground-truth id '" + id + "' (excluded)");
    return s;
}

}  // namespace sonoscrub
