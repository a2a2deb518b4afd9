#ifndef SONOSCRUB_PIPELINE_HPP
#define SONOSCRUB_PIPELINE_HPP

#include <string>
#include <vector>

#include "sonoscrub/config.hpp"
#include "sonoscrub/manifest.hpp"
#include "sonoscrub/ocr.hpp"
#include "sonoscrub/score.hpp"
#include "sonoscrub/textkx.hpp"

namespace sonoscrub {

// Expands input specs into a sorted, de-duplicated file list. A spec is a
// literal path (kept even if missing, so the failure surfaces as a
// DECODE_ERROR record), a directory (its regular files with common image
// extensions), or a glob on the final path component (*, ?, [...]).
std::vector<std::string> resolve_inputs(const std::vector<std::string>& specs);

// Single-image analysis, no I/O. Stages run in the fixed order crop ->
// filters -> dualview -> calipers -> textkx, skipping the disabled ones.
// With crop enabled the filter, dual-view and caliper stages see the cropped
// scan area; dual split_x and caliper boxes are reported in original-image
// coordinates, and OCR always reads the full frame (annotations sit outside
// the scan area). `ocr` may be null only when the textkx stage is off.
// BackendError downgrades the record to OCR_SKIPPED, keeping other stages;
// a frame too small for the dual-view detector reports is_dual = false.
ScanReport analyze_scan(const ScanImage& img, const PipelineConfig& cfg, OcrBackend* ocr,
                        const Grammar& grammar);

// Batch run: validates the config, resolves inputs, opens the manifest and
// the optional crops directory (failures are ConfigError, raised before any
// image is processed), then analyzes images on cfg.workers threads. Each
// worker owns a clone of the OCR backend; records are appended in input
// order, one per input, so reruns are byte-identical (timings off). Decode
// failures become DECODE_ERROR records and never abort the batch.
RunSummary run(const PipelineConfig& cfg);

}  // namespace sonoscrub

#endif
