#ifndef SONOSCRUB_MANIFEST_HPP
#define SONOSCRUB_MANIFEST_HPP

#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sonoscrub/artifacts.hpp"
#include "sonoscrub/cropper.hpp"
#include "sonoscrub/filters.hpp"
#include "sonoscrub/textkx.hpp"
#include "sonoscrub/types.hpp"

namespace sonoscrub {

// OK: every enabled stage ran. DECODE_ERROR: the image could not be read,
// only source_id and status are populated. OCR_SKIPPED: the text backend
// failed for this image; every other enabled stage is still reported.
enum class ScanStatus { OK, DECODE_ERROR, OCR_SKIPPED };

const char* to_string(ScanStatus s);
ScanStatus scan_status_from_string(const std::string& s);

// One manifest record. A stage field is populated iff the stage was enabled
// and the status permits it.
struct ScanReport {
    std::string source_id;
    int width = 0;
    int height = 0;
    ScanStatus status = ScanStatus::OK;
    std::optional<CropResult> crop;
    std::optional<FilterVerdict> filter;
    std::optional<DualViewResult> dual_view;  // split_x in original-image x
    std::optional<CaliperReport> calipers;    // boxes in original-image coords
    std::optional<TextAnnotation> text;
    std::map<std::string, double> timings_ms;  // per stage, empty unless requested
    bool operator==(const ScanReport&) const = default;
};

// Single-line JSON, stable alphabetical key order, field names shared with
// the synthetic ground-truth records so the two streams diff directly.
// parse(serialize(r)) == r for every representable report.
std::string report_json_line(const ScanReport& r);
ScanReport report_from_json_line(const std::string& line);  // FormatError

// Whole-file readers. read_manifest throws ConfigError when the file cannot
// be opened and FormatError on a malformed line (with its line number).
std::vector<ScanReport> read_manifest(const std::string& path);

// Append-only serialized sink shared by the worker pool. The constructor
// truncates; failure to open is a ConfigError raised before any processing.
class ManifestWriter {
  public:
    explicit ManifestWriter(const std::string& path);
    void write_line(const std::string& line);

  private:
    std::ofstream out_;
    std::mutex mu_;
    std::string path_;
};

}  // namespace sonoscrub

#endif
