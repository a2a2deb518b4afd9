#include "sonoscrub/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fnmatch.h>
#include <map>
#include <thread>

#include "sonoscrub/image_io.hpp"

namespace sonoscrub {
namespace {

namespace fs = std::filesystem;

bool has_image_extension(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e == ".png" || e == ".jpg" || e == ".jpeg" || e == ".bmp" || e == ".tif" ||
           e == ".tiff";
}

bool is_glob(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

std::string crop_output_path(const PipelineConfig& cfg, const std::string& input_path) {
    fs::path in(input_path);
    return (fs::path(cfg.io.crops_dir) / (in.stem().string() + cfg.io.crop_suffix + ".png"))
        .string();
}

class StageTimer {
  public:
    StageTimer(ScanReport& report, bool enabled) : report_(report), enabled_(enabled) {}
    template <typename F>
    auto time(const char* stage, F&& f) {
        if (!enabled_) return f();
        auto t0 = std::chrono::steady_clock::now();
        auto result = f();
        auto t1 = std::chrono::steady_clock::now();
        report_.timings_ms[stage] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        return result;
    }

  private:
    ScanReport& report_;
    bool enabled_;
};

}  // namespace

std::vector<std::string> resolve_inputs(const std::vector<std::string>& specs) {
    std::vector<std::string> out;
    for (const auto& spec : specs) {
        if (spec.empty()) continue;
        std::error_code ec;
        if (fs::is_directory(spec, ec)) {
            for (const auto& entry : fs::directory_iterator(spec, ec))
                if (entry.is_regular_file() && has_image_extension(entry.path()))
                    out.push_back(entry.path().string());
            continue;
        }
        if (is_glob(spec)) {
            fs::path p(spec);
            fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
            std::string pattern = p.filename().string();
            if (!fs::is_directory(dir, ec)) continue;
            for (const auto& entry : fs::directory_iterator(dir, ec))
                if (entry.is_regular_file() &&
                    ::fnmatch(pattern.c_str(), entry.path().filename().c_str(), 0) == 0)
                    out.push_back(entry.path().string());
            continue;
        }
        out.push_back(spec);  // literal path, possibly missing
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ScanReport analyze_scan(const ScanImage& img, const PipelineConfig& cfg, OcrBackend* ocr,
                        const Grammar& grammar) {
    ScanReport r;
    r.source_id = img.source_id;
    r.width = img.width;
    r.height = img.height;
    StageTimer timer(r, cfg.io.emit_timings);

    BoundingBox area = img.full_box();
    if (cfg.stages.crop) {
        r.crop = timer.time("crop", [&] { return crop_scan(img, cfg.cropper); });
        area = r.crop->final_box;
    }
    const bool cropped = cfg.stages.crop && !(area == img.full_box());
    if (cfg.stages.filters) {
        r.filter = timer.time("filters", [&] {
            std::optional<BoundingBox> invalid_area;
            if (cfg.stages.crop && !cfg.invalid_use_full_frame) invalid_area = area;
            FilterVerdict v = detect_invalid(img, cfg.filters, invalid_area);
            FilterVerdict nb =
                cropped ? detect_non_b_mode(img.crop(area), cfg.filters)
                        : detect_non_b_mode(img, cfg.filters);
            v.non_b_mode = nb.non_b_mode;
            v.color_fraction = nb.color_fraction;
            v.trigger = nb.trigger;
            return v;
        });
    }
    if (cfg.stages.dualview) {
        r.dual_view = timer.time("dualview", [&] {
            try {
                DualViewResult d = cropped ? detect_dual_view(img.crop(area), cfg.dualview)
                                           : detect_dual_view(img, cfg.dualview);
                if (d.split_x) d.split_x = area.x_left + *d.split_x;
                return d;
            } catch (const ParameterError&) {
                return DualViewResult{};  // frame too small to probe
            }
        });
    }
    if (cfg.stages.calipers) {
        r.calipers = timer.time("calipers", [&] {
            CaliperReport rep = cropped ? detect_calipers(img.crop(area), cfg.calipers)
                                        : detect_calipers(img, cfg.calipers);
            for (auto& b : rep.boxes) b = b.translated(area.x_left, area.y_top);
            return rep;
        });
    }
    if (cfg.stages.textkx) {
        if (!ocr) throw ParameterError("textkx stage enabled but no OCR backend supplied");
        try {
            r.text = timer.time("textkx", [&] {
                auto tokens = recognize_text(img, *ocr, cfg.textkx.min_confidence);
                return classify_annotation(tokens, grammar);
            });
        } catch (const BackendError&) {
            r.status = ScanStatus::OCR_SKIPPED;
            r.text.reset();
            r.timings_ms.erase("textkx");
        }
    }
    return r;
}

RunSummary run(const PipelineConfig& cfg) {
    validate_config(cfg);
    if (cfg.io.manifest_path.empty()) throw ConfigError("io.manifest path is empty");
    const auto inputs = resolve_inputs(cfg.io.inputs);

    if (!cfg.io.crops_dir.empty()) {
        std::error_code ec;
        fs::create_directories(cfg.io.crops_dir, ec);
        if (ec || !fs::is_directory(cfg.io.crops_dir))
            throw ConfigError("cannot create crops directory '" + cfg.io.crops_dir + "'");
    }
    ManifestWriter writer(cfg.io.manifest_path);

    std::unique_ptr<OcrBackend> prototype;
    if (cfg.stages.textkx) prototype = make_backend(cfg.textkx.backend);
    const Grammar grammar(cfg.textkx);

    RunSummary summary;
    std::mutex sink_mu;  // guards summary, pending, next_write
    std::map<size_t, std::string> pending;
    size_t next_write = 0;

    auto emit = [&](size_t index, const ScanReport& report) {
        std::string line = report_json_line(report);
        std::lock_guard<std::mutex> lock(sink_mu);
        accumulate_report(summary, report);
        pending.emplace(index, std::move(line));
        while (!pending.empty() && pending.begin()->first == next_write) {
            writer.write_line(pending.begin()->second);
            pending.erase(pending.begin());
            ++next_write;
        }
    };

    std::atomic<size_t> next_input{0};
    std::exception_ptr first_failure;
    std::mutex failure_mu;

    auto worker = [&](std::unique_ptr<OcrBackend> backend) {
        for (;;) {
            size_t i = next_input.fetch_add(1);
            if (i >= inputs.size()) return;
            const std::string& path = inputs[i];
            ScanReport report;
            try {
                ScanImage img = load_image(path);
                report = analyze_scan(img, cfg, backend.get(), grammar);
                if (!cfg.io.crops_dir.empty() && report.crop) {
                    try {
                        save_png(img.crop(report.crop->final_box), crop_output_path(cfg, path));
                    } catch (const FormatError& e) {
                        std::lock_guard<std::mutex> lock(sink_mu);
                        summary.warnings.push_back(std::string("crop emission failed: ") +
                                                   e.what());
                    }
                }
            } catch (const FormatError&) {
                report = ScanReport{};
                report.source_id = fs::path(path).stem().string();
                report.status = ScanStatus::DECODE_ERROR;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!first_failure) first_failure = std::current_exception();
                return;
            }
            emit(i, report);
        }
    };

    const int workers = static_cast<int>(
        std::min<size_t>(static_cast<size_t>(cfg.workers), std::max<size_t>(inputs.size(), 1)));
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        std::unique_ptr<OcrBackend> backend;
        if (prototype) backend = (w == workers - 1) ? std::move(prototype) : prototype->clone();
        threads.emplace_back(worker, std::move(backend));
    }
    for (auto& t : threads) t.join();
    if (first_failure) std::rethrow_exception(first_failure);
    for (const auto& cat : score_categories()) summary.flag_counts.try_emplace(cat, 0);
    return summary;
}

}  // namespace sonoscrub
