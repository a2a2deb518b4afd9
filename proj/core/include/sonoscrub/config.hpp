#ifndef SONOSCRUB_CONFIG_HPP
#define SONOSCRUB_CONFIG_HPP

#include <string>
#include <vector>

#include "sonoscrub/artifacts.hpp"
#include "sonoscrub/cropper.hpp"
#include "sonoscrub/filters.hpp"
#include "sonoscrub/textkx.hpp"
#include "sonoscrub/types.hpp"

namespace sonoscrub {

struct StageToggles {
    bool crop = true;
    bool filters = true;
    bool dualview = true;
    bool calipers = true;
    bool textkx = true;
    bool operator==(const StageToggles&) const = default;
};

struct IoConfig {
    std::vector<std::string> inputs;  // files, directories, or globs
    std::string manifest_path;
    std::string crops_dir;            // empty disables cropped-image emission
    std::string crop_suffix = "_crop";
    bool emit_timings = false;
    bool operator==(const IoConfig&) const = default;
};

// Full run configuration. Stage order is fixed
// (crop -> filters -> dualview -> calipers -> textkx); toggles only remove
// stages. With crop enabled the filter, dual-view and caliper stages see the
// cropped scan area; invalid_use_full_frame restores the full-frame scope
// for the invalid-scan rule alone.
struct PipelineConfig {
    StageToggles stages;
    int workers = 1;
    bool invalid_use_full_frame = false;
    IoConfig io;
    CropConfig cropper;
    FilterConfig filters;
    CaliperConfig calipers;
    DualViewConfig dualview;
    TextkxConfig textkx;
    bool operator==(const PipelineConfig&) const = default;
};

// "hlo-hhi:slo-shi:vlo-vhi", e.g. "345-15:0.45-1:0.35-1". Hue wraps through
// zero when hlo > hhi.
HsvRange parse_hsv_range(const std::string& s);
std::string format_hsv_range(const HsvRange& r);

// Flat INI: [section] headers, key = value lines, # or ; comments. Unknown
// sections or keys are ConfigError, as are malformed values. The repeatable
// keys are io.input (appends) and every category in [textkx.patterns] (the
// first line of a category replaces its default patterns, further lines
// append).
PipelineConfig parse_config_text(const std::string& text);
PipelineConfig load_config(const std::string& path);

// Renders a config back to parseable text; every key appears.
std::string format_config(const PipelineConfig& cfg);
// format_config of the defaults, with a commented syntax reference.
std::string default_config_text();

// Structural invariants: at least one stage, workers >= 1, fractions in
// range. Throws ConfigError.
void validate_config(const PipelineConfig& cfg);

}  // namespace sonoscrub

#endif
