#ifndef SONOSCRUB_OCR_HPP
#define SONOSCRUB_OCR_HPP

#include <memory>
#include <string>
#include <vector>

#include "sonoscrub/types.hpp"

namespace sonoscrub {

struct OcrToken {
    std::string text;
    BoundingBox bbox;
    double confidence = 0.0;  // in [0, 1]
    bool operator==(const OcrToken&) const = default;
};

// Text recognizers are pluggable. A backend must be deterministic for a fixed
// input; workers never share one instance, they clone their own handle.
class OcrBackend {
  public:
    virtual ~OcrBackend() = default;
    virtual std::vector<OcrToken> recognize(const ScanImage& img) = 0;
    virtual std::unique_ptr<OcrBackend> clone() const = 0;
};

// Exact recognizer for the embedded 5x7 font: thresholds bright ink
// (gray >= 200), then anchors each connected component against every glyph
// bitmap at integer scales 1..4 and accepts only pixel-perfect matches.
// Recognized glyphs are grouped into tokens by line and horizontal gap.
class GlyphOcrBackend : public OcrBackend {
  public:
    explicit GlyphOcrBackend(int ink_threshold = 200) : ink_threshold_(ink_threshold) {}
    std::vector<OcrToken> recognize(const ScanImage& img) override;
    std::unique_ptr<OcrBackend> clone() const override;

  private:
    int ink_threshold_;
};

// Backend that never reports text (disables OCR without disabling the stage).
class NullOcrBackend : public OcrBackend {
  public:
    std::vector<OcrToken> recognize(const ScanImage&) override { return {}; }
    std::unique_ptr<OcrBackend> clone() const override {
        return std::make_unique<NullOcrBackend>();
    }
};

// Line-protocol subprocess backend. The command is spawned once per handle
// via `sh -c`; each request writes the path of a temporary PNG on one line to
// its stdin and reads token lines `text<TAB>x<TAB>y<TAB>w<TAB>h<TAB>conf`
// terminated by a blank line from its stdout. Any protocol or process
// failure raises BackendError.
class SubprocessOcrBackend : public OcrBackend {
  public:
    explicit SubprocessOcrBackend(std::string command);
    ~SubprocessOcrBackend() override;
    SubprocessOcrBackend(const SubprocessOcrBackend&) = delete;
    SubprocessOcrBackend& operator=(const SubprocessOcrBackend&) = delete;
    std::vector<OcrToken> recognize(const ScanImage& img) override;
    std::unique_ptr<OcrBackend> clone() const override;

  private:
    void ensure_spawned();
    void shutdown();
    std::string command_;
    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
};

// "builtin" -> GlyphOcrBackend, "none" -> NullOcrBackend,
// "command:<shell command>" -> SubprocessOcrBackend. Anything else throws
// ConfigError.
std::unique_ptr<OcrBackend> make_backend(const std::string& spec);

// Runs the backend, drops tokens below min_confidence, and orders the rest
// top-to-bottom then left-to-right.
std::vector<OcrToken> recognize_text(const ScanImage& img, OcrBackend& backend,
                                     double min_confidence);

}  // namespace sonoscrub

#endif
