#ifndef SONOSCRUB_SCORE_HPP
#define SONOSCRUB_SCORE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sonoscrub/manifest.hpp"

namespace sonoscrub {

struct ConfusionCells {
    long long tp = 0;
    long long fp = 0;
    long long tn = 0;
    long long fn = 0;
    long long total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionCells&) const = default;
};

// TP/(TP+FN) and TN/(TN+FP). A zero denominator leaves the metric undefined
// (nullopt), never 0.
std::optional<double> sensitivity(const ConfusionCells& c);
std::optional<double> specificity(const ConfusionCells& c);

struct RunSummary {
    long long processed = 0;  // records written; for score, matched pairs
    long long decode_errors = 0;
    long long ocr_skipped = 0;
    std::map<std::string, long long> flag_counts;     // positives per category
    std::map<std::string, ConfusionCells> confusion;  // empty without ground truth
    std::vector<std::string> warnings;
};

// Flag categories: invalid, non_b_mode, calipers, dual_view, text_present,
// axilla, measurement, procedural. Valued categories: laterality,
// orientation, clock, distance — a prediction only scores TP when its value
// matches the truth exactly; a positive prediction of the wrong value counts
// as FN, so TP+FP+TN+FN = n holds per category.
const std::vector<std::string>& score_categories();

// Per-flag positive counts plus status tallies for a finished batch.
RunSummary summarize_reports(const std::vector<ScanReport>& reports);
void accumulate_report(RunSummary& summary, const ScanReport& report);

// Joins two JSONL files on source_id and fills the confusion matrices.
// Either side accepts manifest records or ground-truth records (the latter
// nest the fields under a "truth" key). Ids present on only one side are
// excluded and listed in warnings. Throws ConfigError when a file cannot be
// opened, FormatError on malformed records.
RunSummary score(const std::string& manifest_path, const std::string& truth_path);

}  // namespace sonoscrub

#endif
