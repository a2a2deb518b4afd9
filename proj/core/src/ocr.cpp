#include "sonoscrub/ocr.hpp"

#include <csignal>
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sonoscrub/font.hpp"
#include "sonoscrub/image_io.hpp"
#include "sonoscrub/imgops.hpp"

namespace sonoscrub {

namespace {

struct GlyphPattern {
    char c;
    font::Glyph rows;
    Point first_ink;  // topmost-then-leftmost set cell
};

bool glyph_bit(const font::Glyph& g, int col, int row) {
    return (g[row] & (1u << (4 - col))) != 0;
}

// ':' must be tried before '.', otherwise its upper dot alone is a valid '.'
// match (the lower dot falls outside the candidate cell). All other glyphs
// are single components with mutually exclusive exact patterns.
const std::vector<GlyphPattern>& patterns() {
    static const std::vector<GlyphPattern> pats = [] {
        std::string order = ":ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-+*/'.";
        std::vector<GlyphPattern> v;
        for (char c : order) {
            GlyphPattern p{c, font::glyph(c), {0, 0}};
            bool found = false;
            for (int r = 0; r < font::kGlyphHeight && !found; ++r)
                for (int col = 0; col < font::kGlyphWidth && !found; ++col)
                    if (glyph_bit(p.rows, col, r)) {
                        p.first_ink = {col, r};
                        found = true;
                    }
            v.push_back(p);
        }
        return v;
    }();
    return pats;
}

struct Hit {
    char c;
    BoundingBox cell;  // full scaled glyph cell
    int scale;
};

// The s x s block at (x, y) must be uniformly ink or uniformly blank.
bool block_uniform(const BinaryMask& ink, int x, int y, int s, bool want) {
    for (int dy = 0; dy < s; ++dy)
        for (int dx = 0; dx < s; ++dx)
            if ((ink.get(x + dx, y + dy) != 0) != want) return false;
    return true;
}

std::vector<OcrToken> group_tokens(std::vector<Hit> hits) {
    std::vector<OcrToken> tokens;
    if (hits.empty()) return tokens;
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.cell.y_top != b.cell.y_top) return a.cell.y_top < b.cell.y_top;
        return a.cell.x_left < b.cell.x_left;
    });
    // split into lines (rendered lines share an exact anchor row), then walk
    // each line left to right and break tokens at gaps wider than the
    // inter-glyph spacing allows
    std::vector<std::vector<Hit>> lines;
    for (const Hit& h : hits) {
        if (lines.empty() || std::abs(h.cell.y_top - lines.back().front().cell.y_top) > 2)
            lines.emplace_back();
        lines.back().push_back(h);
    }
    for (auto& line : lines) {
        std::sort(line.begin(), line.end(),
                  [](const Hit& a, const Hit& b) { return a.cell.x_left < b.cell.x_left; });
        std::string text;
        BoundingBox box;
        auto flush = [&] {
            if (!text.empty()) tokens.push_back({text, box, 1.0});
            text.clear();
        };
        for (size_t i = 0; i < line.size(); ++i) {
            const Hit& h = line[i];
            if (!text.empty()) {
                const int gap = h.cell.x_left - box.x_right;
                if (gap > 3 * h.scale) flush();
            }
            if (text.empty()) {
                box = h.cell;
            } else {
                box.x_right = std::max(box.x_right, h.cell.x_right);
                box.y_top = std::min(box.y_top, h.cell.y_top);
                box.y_bottom = std::max(box.y_bottom, h.cell.y_bottom);
            }
            text += h.c;
        }
        flush();
    }
    return tokens;
}

}  // namespace

std::vector<OcrToken> GlyphOcrBackend::recognize(const ScanImage& img) {
    const ScanImage gray = img.channels == 1 ? img : to_grayscale(img);
    BinaryMask ink = BinaryMask::make(gray.width, gray.height);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x)
            if (gray.at(x, y) >= ink_threshold_) ink.set(x, y, true);

    std::vector<int> labels;
    std::vector<Component> comps = connected_components(ink, labels);
    std::vector<int> order(comps.size());
    for (size_t i = 0; i < comps.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Point pa = comps[a].first_pixel, pb = comps[b].first_pixel;
        if (pa.y != pb.y) return pa.y < pb.y;
        return pa.x < pb.x;
    });
    std::vector<int> comp_index(comps.size() + 1);  // 1-based component id -> slot
    for (size_t i = 0; i < comps.size(); ++i) comp_index[comps[i].id] = static_cast<int>(i);

    std::vector<bool> consumed(comps.size(), false);
    std::vector<Hit> hits;
    std::vector<int> inside;
    for (int slot : order) {
        if (consumed[slot]) continue;
        const Point first = comps[slot].first_pixel;
        bool matched = false;
        for (int s = 1; s <= 4 && !matched; ++s) {
            for (const GlyphPattern& p : patterns()) {
                const int ax = first.x - s * p.first_ink.x;
                const int ay = first.y - s * p.first_ink.y;
                if (ax < 0 || ay < 0 || ax + font::kGlyphWidth * s > ink.width ||
                    ay + font::kGlyphHeight * s > ink.height)
                    continue;
                bool ok = true;
                for (int r = 0; r < font::kGlyphHeight && ok; ++r)
                    for (int c = 0; c < font::kGlyphWidth && ok; ++c)
                        ok = block_uniform(ink, ax + c * s, ay + r * s, s,
                                           glyph_bit(p.rows, c, r));
                if (!ok) continue;
                // every component touching the cell must live entirely inside
                // it, otherwise this is a fragment of something bigger
                const BoundingBox cell{ax, ay, ax + font::kGlyphWidth * s,
                                       ay + font::kGlyphHeight * s};
                inside.clear();
                for (int y = cell.y_top; y < cell.y_bottom && ok; ++y)
                    for (int x = cell.x_left; x < cell.x_right; ++x) {
                        if (!ink.get(x, y)) continue;
                        const int id = labels[static_cast<size_t>(y) * ink.width + x];
                        const int cslot = comp_index[id];
                        if (!cell.contains(comps[cslot].bbox)) {
                            ok = false;
                            break;
                        }
                        inside.push_back(cslot);
                    }
                if (!ok) continue;
                for (int cslot : inside) consumed[cslot] = true;
                hits.push_back({p.c, cell, s});
                matched = true;
                break;
            }
        }
    }
    return group_tokens(std::move(hits));
}

std::unique_ptr<OcrBackend> GlyphOcrBackend::clone() const {
    return std::make_unique<GlyphOcrBackend>(ink_threshold_);
}

SubprocessOcrBackend::SubprocessOcrBackend(std::string command)
    : command_(std::move(command)) {
    if (command_.empty()) throw ConfigError("ocr: empty backend command");
}

SubprocessOcrBackend::~SubprocessOcrBackend() { shutdown(); }

void SubprocessOcrBackend::shutdown() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    if (child_pid_ > 0) {
        int status = 0;
        waitpid(child_pid_, &status, 0);
        child_pid_ = -1;
    }
}

void SubprocessOcrBackend::ensure_spawned() {
    if (child_pid_ > 0) return;
    // a dying backend must surface as BackendError, not kill the batch
    signal(SIGPIPE, SIG_IGN);
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0) throw BackendError("ocr: pipe failed");
    if (pipe(out_pipe) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw BackendError("ocr: pipe failed");
    }
    const pid_t pid = fork();
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        throw BackendError("ocr: fork failed");
    }
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    child_pid_ = pid;
}

std::vector<OcrToken> SubprocessOcrBackend::recognize(const ScanImage& img) {
    ensure_spawned();
    static std::atomic<unsigned> counter{0};
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() /
        ("sonoscrub_ocr_" + std::to_string(getpid()) + "_" +
         std::to_string(counter.fetch_add(1)) + ".png");
    save_png(img, tmp.string());
    struct Cleanup {
        std::filesystem::path p;
        ~Cleanup() {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    } cleanup{tmp};

    const std::string request = tmp.string() + "\n";
    size_t off = 0;
    while (off < request.size()) {
        const ssize_t n = write(to_child_, request.data() + off, request.size() - off);
        if (n <= 0) {
            shutdown();
            throw BackendError("ocr: backend process closed its input");
        }
        off += static_cast<size_t>(n);
    }

    std::string buf;
    std::vector<OcrToken> tokens;
    auto read_line = [&]() -> std::string {
        for (;;) {
            const size_t nl = buf.find('\n');
            if (nl != std::string::npos) {
                std::string line = buf.substr(0, nl);
                buf.erase(0, nl + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return line;
            }
            char chunk[512];
            const ssize_t n = read(from_child_, chunk, sizeof chunk);
            if (n <= 0) {
                shutdown();
                throw BackendError("ocr: backend process ended mid-response");
            }
            buf.append(chunk, static_cast<size_t>(n));
        }
    };
    for (;;) {
        const std::string line = read_line();
        if (line.empty()) break;
        std::istringstream ss(line);
        std::string text, xs, ys, ws, hs, cs;
        if (!std::getline(ss, text, '\t') || !std::getline(ss, xs, '\t') ||
            !std::getline(ss, ys, '\t') || !std::getline(ss, ws, '\t') ||
            !std::getline(ss, hs, '\t') || !std::getline(ss, cs))
            throw BackendError("ocr: malformed backend line: " + line);
        try {
            const int x = std::stoi(xs), y = std::stoi(ys);
            const int w = std::stoi(ws), h = std::stoi(hs);
            const double conf = std::stod(cs);
            if (!text.empty())
                tokens.push_back({text, {x, y, x + w, y + h}, std::clamp(conf, 0.0, 1.0)});
        } catch (const std::exception&) {
            throw BackendError("ocr: malformed backend line: " + line);
        }
    }
    return tokens;
}

std::unique_ptr<OcrBackend> SubprocessOcrBackend::clone() const {
    return std::make_unique<SubprocessOcrBackend>(command_);
}

std::unique_ptr<OcrBackend> make_backend(const std::string& spec) {
    if (spec == "builtin") return std::make_unique<GlyphOcrBackend>();
    if (spec == "none") return std::make_unique<NullOcrBackend>();
    if (spec.rfind("command:", 0) == 0) {
        return std::make_unique<SubprocessOcrBackend>(spec.substr(8));
    }
    throw ConfigError("ocr: unknown backend '" + spec +
                      "' (expected builtin, none, or command:<cmd>)");
}

std::vector<OcrToken> recognize_text(const ScanImage& img, OcrBackend& backend,
                                     double min_confidence) {
    std::vector<OcrToken> tokens = backend.recognize(img);
    tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                                [&](const OcrToken& t) {
                                    return t.confidence < min_confidence || t.text.empty();
                                }),
                 tokens.end());
    std::sort(tokens.begin(), tokens.end(), [](const OcrToken& a, const OcrToken& b) {
        if (a.bbox.y_top != b.bbox.y_top) return a.bbox.y_top < b.bbox.y_top;
        if (a.bbox.x_left != b.bbox.x_left) return a.bbox.x_left < b.bbox.x_left;
        return a.text < b.text;
    });
    return tokens;
}

}  // namespace sonoscrub
